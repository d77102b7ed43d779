#include "euler3/config_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "euler3/errors.hpp"

namespace euler3 {

namespace {

constexpr double kBracketMargin = 1e-9;
constexpr int kBisectionIterations = 60;
constexpr int kSecantIterations = 8;

}  // namespace

MassTriple::MassTriple(double m1, double m2, double m3) : m_{m1, m2, m3}, total_(m1 + m2 + m3) {
    for (double m : m_) {
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw DomainError("masses must be finite and positive, got " + std::to_string(m));
        }
    }
}

double euler_condition_residual(double lambda, const MassTriple& masses) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw DomainError("collinear ratio must lie in (0,1)");
    }
    const double m1 = masses.m1();
    const double m2 = masses.m2();
    const double m3 = masses.m3();
    const double mu = 1.0 - lambda;
    const double left = (m3 / (lambda * lambda) + m2) / (m3 * lambda + m2);
    const double right = (m3 / (mu * mu) + m1) / (m3 * mu + m1);
    return left - right;
}

double solve_lambda0(const MassTriple& masses) {
    auto f = [&](double x) { return euler_condition_residual(x, masses); };

    double lo = kBracketMargin;
    double hi = 1.0 - kBracketMargin;
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        throw ConvergenceError("no sign change of the collinear condition on (0,1)");
    }

    for (int i = 0; i < kBisectionIterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }

    // Secant polish inside the bracket; keep the best iterate seen.
    double best = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
    double f_best = f(best);
    double x0 = lo, x1 = hi, f0 = f_lo, f1 = f_hi;
    for (int i = 0; i < kSecantIterations && f1 != f0; ++i) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 > 0.0 && x2 < 1.0)) break;
        const double f2 = f(x2);
        if (std::abs(f2) < std::abs(f_best)) {
            best = x2;
            f_best = f2;
        }
        if (f2 == 0.0) break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    return best;
}

CollinearGeometry derived_constants(const MassTriple& masses, double lambda0) {
    if (!(lambda0 > 0.0 && lambda0 < 1.0)) {
        throw DomainError("collinear ratio must lie in (0,1)");
    }
    const double m1 = masses.m1();
    const double m2 = masses.m2();
    const double m3 = masses.m3();
    const double total = masses.total();
    const double mu = 1.0 - lambda0;

    CollinearGeometry g;
    g.lambda0 = lambda0;
    g.s = m1 * m2 + m1 * m3 / lambda0 + m2 * m3 / mu;
    g.a = (m1 * m2 + m1 * m3 * lambda0 * lambda0 + m2 * m3 * mu * mu) / total;
    g.b = g.s;
    g.p = m1 * m2 + m1 * m3 / (lambda0 * lambda0) + m2 * m3 / (mu * mu);
    g.c[0] = -(m2 + m3 * lambda0) / total;
    g.c[1] = (m1 + m3 * mu) / total;
    g.c[2] = g.c[0] + lambda0;
    return g;
}

CollinearGeometry make_geometry(const MassTriple& masses) {
    return derived_constants(masses, solve_lambda0(masses));
}

ConfigurationState reconstruct_configuration(const CollinearGeometry& geom, const Vec3& r, const Vec3& rdot) {
    ConfigurationState state;
    for (int i = 0; i < 3; ++i) {
        state.q[i] = geom.c[i] * r;
        state.v[i] = geom.c[i] * rdot;
    }
    return state;
}

double central_config_residual(const ConfigurationState& state, const MassTriple& masses) {
    const auto& q = state.q;

    double scale = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) scale = std::max(scale, norm(q[i] - q[j]));
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (!(norm(q[i] - q[j]) >= 1e-12 * scale) || scale == 0.0) {
                throw CollisionError("bodies " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                     " collide");
            }
        }
    }

    Vec3 centre;
    for (int i = 0; i < 3; ++i) centre += masses[i] * q[i];
    centre = centre / masses.total();

    double potential = 0.0;
    double inertia = 0.0;
    std::array<Vec3, 3> force{};
    for (int i = 0; i < 3; ++i) {
        inertia += masses[i] * norm2(q[i] - centre);
        for (int j = 0; j < 3; ++j) {
            if (j == i) continue;
            const Vec3 d = q[j] - q[i];
            const double dist = norm(d);
            force[i] += (masses[i] * masses[j] / (dist * dist * dist)) * d;
            if (j > i) potential -= masses[i] * masses[j] / dist;
        }
    }
    const double lambda = potential / inertia;

    double worst = 0.0;
    double force_scale = 0.0;
    for (int i = 0; i < 3; ++i) {
        worst = std::max(worst, norm(force[i] - lambda * masses[i] * (q[i] - centre)));
        force_scale = std::max(force_scale, norm(force[i]));
    }
    return worst / force_scale;
}

}  // namespace euler3
