#include "euler3/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "euler3/errors.hpp"

namespace euler3 {

namespace {

void guard_collision(const SampledLoop& s) {
    for (std::size_t i = 0; i < s.r.size(); ++i) {
        if (!(norm(s.r[i]) >= kCollisionGuard)) {
            throw CollisionError("relative curve passes within the collision guard at t=" + std::to_string(s.times[i]));
        }
    }
}

// Gradient of integral(|r'|^2) / 2 with respect to each coefficient.
void add_kinetic_gradient(const FourierLoop& loop, double factor, std::vector<double>& grad) {
    const double half_period = 0.5 * loop.period();
    for (int j = 0; j < loop.harmonic_count(); ++j) {
        const double w = loop.frequency(j);
        const auto& h = loop.harmonics()[static_cast<std::size_t>(j)];
        const double k = factor * half_period * w * w;
        double* g = grad.data() + 6 * j;
        for (int d = 0; d < 3; ++d) {
            g[d] += k * h.cos[d];
            g[3 + d] += k * h.sin[d];
        }
    }
}

}  // namespace

void EnergyParams::validate() const {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw DomainError("perturbation strength must be >= 0");
    if (!std::isfinite(h)) throw DomainError("energy must be finite");
    if (eps > 0.0 && !(h < 0.0)) throw DomainError("a positive perturbation requires negative energy");
}

void EnergyParams::validate_mountain_pass(const CollinearGeometry& geom) const {
    validate();
    if (!(h > -0.5 * geom.s && h < 0.0)) {
        throw DomainError("energy " + std::to_string(h) + " outside (-s/2, 0) = (" + std::to_string(-0.5 * geom.s) +
                          ", 0)");
    }
}

double GradedValue::gradient_norm() const {
    return std::sqrt(std::inner_product(gradient.begin(), gradient.end(), gradient.begin(), 0.0));
}

double kinetic_energy(const ConfigurationState& state, const MassTriple& masses) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) sum += masses[i] * norm2(state.v[i]);
    return 0.5 * sum;
}

double potential_energy(const std::array<Vec3, 3>& q, const MassTriple& masses, const EnergyParams& params) {
    double newton = 0.0;
    double inverse_square = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const double mm = masses[i] * masses[j];
            const double d2 = norm2(q[i] - q[j]);
            newton += mm / std::sqrt(d2);
            inverse_square += mm / d2;
        }
    }
    double v = -newton;
    if (params.eps != 0.0) v += params.eps / params.h * inverse_square;
    return v;
}

std::array<Vec3, 3> forces(const std::array<Vec3, 3>& q, const MassTriple& masses, const EnergyParams& params) {
    std::array<Vec3, 3> f{};
    const double ratio = params.eps == 0.0 ? 0.0 : params.eps / params.h;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const Vec3 d = q[j] - q[i];
            const double d2 = norm2(d);
            const double dist = std::sqrt(d2);
            const double mm = masses[i] * masses[j];
            // Newtonian attraction plus the (eps/h)/d^2 term; with h < 0 the
            // latter is repulsive.
            const double k = mm / (d2 * dist) - 2.0 * ratio * mm / (d2 * d2);
            f[i] += k * d;
            f[j] -= k * d;
        }
    }
    return f;
}

double action_f_full_sum(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses, int grid) {
    const auto s = sample(loop, resolve_grid(grid, loop.harmonic_count()));
    guard_collision(s);
    double sum = 0.0;
    for (std::size_t n = 0; n < s.r.size(); ++n) {
        const auto state = reconstruct_configuration(geom, s.r[n], s.rdot[n]);
        double kinetic = 0.0;
        for (int i = 0; i < 3; ++i) kinetic += masses[i] * norm2(state.v[i]);
        double potential = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) potential += masses[i] * masses[j] / norm(state.q[i] - state.q[j]);
        }
        sum += 0.5 * kinetic + potential;
    }
    return sum * s.weight();
}

double action_f_reduced(const FourierLoop& loop, const CollinearGeometry& geom, int grid) {
    return geom.a * action_f1(loop, geom, grid).value;
}

double action_f(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses, int grid) {
    const double reduced = action_f_reduced(loop, geom, grid);
    const double full = action_f_full_sum(loop, geom, masses, grid);
    if (std::abs(full - reduced) > 1e-10 * std::abs(reduced)) {
        throw std::logic_error("reduced and three-body actions disagree: " + std::to_string(reduced) + " vs " +
                               std::to_string(full));
    }
    return reduced;
}

GradedValue kepler_action(const FourierLoop& loop, double coupling, int grid) {
    const auto s = sample(loop, resolve_grid(grid, loop.harmonic_count()));
    guard_collision(s);

    double potential = 0.0;
    std::vector<Vec3> dpot(s.r.size());
    for (std::size_t n = 0; n < s.r.size(); ++n) {
        const double d = norm(s.r[n]);
        potential += coupling / d;
        dpot[n] = (-coupling / (d * d * d)) * s.r[n];
    }

    GradedValue out;
    out.value = 0.5 * kinetic_integral(loop) + potential * s.weight();
    out.gradient = project_onto_basis(loop, s, dpot);
    add_kinetic_gradient(loop, 1.0, out.gradient);
    return out;
}

GradedValue action_f1(const FourierLoop& loop, const CollinearGeometry& geom, int grid) {
    return kepler_action(loop, geom.b / geom.a, grid);
}

std::vector<double> potential_V_eps(const SampledLoop& sampled, const CollinearGeometry& geom, const EnergyParams& params) {
    params.validate();
    guard_collision(sampled);
    const double ratio = params.eps == 0.0 ? 0.0 : params.eps / params.h;
    std::vector<double> v(sampled.r.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        const double d = norm(sampled.r[n]);
        v[n] = -geom.s / d + ratio * geom.p / (d * d);
    }
    return v;
}

double potential_integral(const FourierLoop& loop, const CollinearGeometry& geom, const EnergyParams& params, int grid) {
    const auto s = sample(loop, resolve_grid(grid, loop.harmonic_count()));
    const auto v = potential_V_eps(s, geom, params);
    return std::accumulate(v.begin(), v.end(), 0.0) * s.weight();
}

GradedValue phi_eps(const FourierLoop& loop, const CollinearGeometry& geom, const EnergyParams& params, int grid) {
    params.validate();
    GradedValue out;
    const double kin = kinetic_integral(loop);
    if (kin == 0.0) {
        // Only the zero loop has no kinetic energy; ||q|| = 0 there.
        out.gradient.assign(loop.coefficient_count(), 0.0);
        return out;
    }

    const auto s = sample(loop, resolve_grid(grid, loop.harmonic_count()));
    guard_collision(s);
    const double ratio = params.eps == 0.0 ? 0.0 : params.eps / params.h;

    // J = integral(h - V_eps) and its integrand's gradient in r.
    double j_sum = 0.0;
    std::vector<Vec3> dj(s.r.size());
    for (std::size_t n = 0; n < s.r.size(); ++n) {
        const double d = norm(s.r[n]);
        const double d2 = d * d;
        j_sum += params.h + geom.s / d - ratio * geom.p / d2;
        dj[n] = (-geom.s / (d2 * d) + 2.0 * ratio * geom.p / (d2 * d2)) * s.r[n];
    }
    const double j_value = j_sum * s.weight();
    const double norm_sq = geom.a * kin;

    out.value = 0.5 * norm_sq * j_value;
    out.gradient = project_onto_basis(loop, s, dj);
    for (double& g : out.gradient) g *= 0.5 * norm_sq;
    // d(norm_sq)/dc = 2 a * d(kin/2)/dc, times J/2.
    add_kinetic_gradient(loop, geom.a * j_value, out.gradient);
    return out;
}

double energy_residual(const OrbitTimeSeries& series, const EnergyParams& params) {
    params.validate();
    double worst = 0.0;
    for (const auto& state : series.states) {
        const double e = kinetic_energy(state, series.masses) + potential_energy(state.q, series.masses, params);
        worst = std::max(worst, std::abs(e - params.h));
    }
    return worst;
}

double kepler_lower_bound(double coupling, double period) {
    if (!(coupling > 0.0) || !(period > 0.0)) throw DomainError("coupling and period must be positive");
    const double two_pi = 2.0 * std::numbers::pi;
    return 1.5 * std::cbrt(two_pi * two_pi) * std::cbrt(coupling * coupling) * std::cbrt(period);
}

double kinetic_identity_ratio(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses,
                              int grid) {
    if (kinetic_integral(loop) == 0.0) throw DomainError("kinetic identity is undefined for the zero loop");
    const auto s = sample(loop, resolve_grid(grid, loop.harmonic_count()));
    double pairwise = 0.0;
    double weighted = 0.0;
    for (std::size_t n = 0; n < s.r.size(); ++n) {
        const auto state = reconstruct_configuration(geom, s.r[n], s.rdot[n]);
        for (int i = 0; i < 3; ++i) {
            weighted += masses[i] * norm2(state.v[i]);
            for (int j = i + 1; j < 3; ++j) pairwise += masses[i] * masses[j] * norm2(state.v[i] - state.v[j]);
        }
    }
    return pairwise / weighted;
}

double jensen_gap(std::span<const double> samples) {
    if (samples.empty()) throw DomainError("jensen_gap needs at least one sample");
    double mean = 0.0;
    double mean_phi = 0.0;
    for (double k : samples) {
        if (!(k > 0.0)) throw DomainError("jensen_gap samples must be positive");
        mean += k;
        mean_phi -= std::sqrt(k);
    }
    const auto n = static_cast<double>(samples.size());
    mean /= n;
    mean_phi /= n;
    return mean_phi + std::sqrt(mean);
}

}  // namespace euler3
