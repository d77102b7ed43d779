#include "euler3/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "euler3/errors.hpp"

namespace euler3 {

namespace {

using Phase = std::array<Vec3, 6>;

Phase derivative(const Phase& x, const MassTriple& masses, const EnergyParams& params) {
    const auto f = forces({x[0], x[1], x[2]}, masses, params);
    return {x[3], x[4], x[5], f[0] / masses[0], f[1] / masses[1], f[2] / masses[2]};
}

Phase combine(const Phase& x, double h, const Phase& k) {
    Phase out;
    for (std::size_t i = 0; i < 6; ++i) out[i] = x[i] + h * k[i];
    return out;
}

double largest_distance(const std::array<Vec3, 3>& q) {
    return std::max({norm(q[0] - q[1]), norm(q[0] - q[2]), norm(q[1] - q[2])});
}

double smallest_distance(const std::array<Vec3, 3>& q) {
    return std::min({norm(q[0] - q[1]), norm(q[0] - q[2]), norm(q[1] - q[2])});
}

double phase_norm(const ConfigurationState& s) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) sum += norm2(s.q[i]) + norm2(s.v[i]);
    return std::sqrt(sum);
}

}  // namespace

EomResidual eom_residual_spectral(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses,
                                  const EnergyParams& params, int grid) {
    params.validate();
    const auto s = sample(loop, resolve_grid(grid, loop.harmonic_count()));
    const EnergyParams newton{params.h, 0.0};

    double worst_newton = 0.0, worst_perturbed = 0.0;
    double scale_newton = 0.0, scale_perturbed = 0.0;
    for (std::size_t n = 0; n < s.r.size(); ++n) {
        if (!(norm(s.r[n]) >= kCollisionGuard)) throw CollisionError("loop collides on the residual grid");
        const auto state = reconstruct_configuration(geom, s.r[n], s.rdot[n]);
        const auto f0 = forces(state.q, masses, newton);
        const auto f1 = forces(state.q, masses, params);
        for (int i = 0; i < 3; ++i) {
            const Vec3 inertial = masses[i] * geom.c[i] * s.rddot[n];
            worst_newton = std::max(worst_newton, norm(inertial - f0[i]));
            worst_perturbed = std::max(worst_perturbed, norm(inertial - f1[i]));
            scale_newton = std::max(scale_newton, norm(f0[i]));
            scale_perturbed = std::max(scale_perturbed, norm(f1[i]));
        }
    }
    return {worst_newton / scale_newton, worst_perturbed / scale_perturbed};
}

OrbitTimeSeries integrate(const ConfigurationState& initial, const MassTriple& masses, const EnergyParams& params,
                          int step_count, double final_time) {
    params.validate();
    if (step_count < 1) throw DomainError("step count must be positive");
    const double scale = largest_distance(initial.q);
    if (!(smallest_distance(initial.q) >= 1e-9 * scale) || scale == 0.0) {
        throw CollisionError("initial state is a collision");
    }

    OrbitTimeSeries series;
    series.masses = masses;
    series.params = params;
    series.step = final_time / step_count;
    series.times.reserve(static_cast<std::size_t>(step_count) + 1);
    series.states.reserve(static_cast<std::size_t>(step_count) + 1);
    series.times.push_back(0.0);
    series.states.push_back(initial);

    Phase x{initial.q[0], initial.q[1], initial.q[2], initial.v[0], initial.v[1], initial.v[2]};
    const double h = series.step;
    for (int n = 1; n <= step_count; ++n) {
        const Phase k1 = derivative(x, masses, params);
        const Phase k2 = derivative(combine(x, 0.5 * h, k1), masses, params);
        const Phase k3 = derivative(combine(x, 0.5 * h, k2), masses, params);
        const Phase k4 = derivative(combine(x, h, k3), masses, params);
        for (std::size_t i = 0; i < 6; ++i) x[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        const ConfigurationState state{{x[0], x[1], x[2]}, {x[3], x[4], x[5]}};
        if (!(smallest_distance(state.q) >= 1e-9 * scale)) {
            throw CollisionError("collision at t=" + std::to_string(n * h));
        }
        series.times.push_back(n == step_count ? final_time : n * h);
        series.states.push_back(state);
    }
    return series;
}

ConfigurationState initial_state(const FourierLoop& loop, const CollinearGeometry& geom) {
    return reconstruct_configuration(geom, loop.evaluate(0.0), loop.derivative(0.0));
}

OrbitTimeSeries sample_series(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses,
                              const EnergyParams& params, int grid) {
    const auto s = sample(loop, resolve_grid(grid, loop.harmonic_count()));
    OrbitTimeSeries series;
    series.masses = masses;
    series.params = params;
    series.times = s.times;
    series.states.reserve(s.r.size());
    for (std::size_t n = 0; n < s.r.size(); ++n) series.states.push_back(reconstruct_configuration(geom, s.r[n], s.rdot[n]));
    return series;
}

double closure_error(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses,
                     const EnergyParams& params, int step_count) {
    const auto start = initial_state(loop, geom);
    const auto series = integrate(start, masses, params, step_count, loop.period());
    const auto& end = series.states.back();
    ConfigurationState diff;
    for (int i = 0; i < 3; ++i) {
        diff.q[i] = end.q[i] - start.q[i];
        diff.v[i] = end.v[i] - start.v[i];
    }
    return phase_norm(diff) / phase_norm(start);
}

double collinearity_drift(const OrbitTimeSeries& series, double lambda0) {
    double worst = 0.0;
    for (const auto& s : series.states) {
        const double defect = norm(s.q[2] - s.q[0] - lambda0 * (s.q[1] - s.q[0]));
        const double scale = largest_distance(s.q);
        if (scale > 0.0) worst = std::max(worst, defect / scale);
    }
    return worst;
}

DistinctionReport compare_orbits(const FourierLoop& candidate, const CollinearGeometry& geom, int grid) {
    const int m = resolve_grid(grid, candidate.harmonic_count());
    DistinctionReport out;
    out.kepler_minimum = kepler_lower_bound(geom.b / geom.a, candidate.period());
    out.action_gap_f1 = action_f1(candidate, geom, m).value - out.kepler_minimum;

    const auto s = sample(candidate, m);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double mean = 0.0;
    for (const auto& r : s.r) {
        const double d = norm(r);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        mean += d;
    }
    mean /= static_cast<double>(s.r.size());
    out.separation_variation = (hi - lo) / mean;
    out.is_kepler_minimizer_like =
        out.action_gap_f1 <= 1e-6 * out.kepler_minimum && out.separation_variation <= 1e-6;
    return out;
}

}  // namespace euler3
