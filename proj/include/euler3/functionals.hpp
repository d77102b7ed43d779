#pragma once

#include <array>
#include <span>
#include <vector>

#include "euler3/config_core.hpp"
#include "euler3/loop_space.hpp"

namespace euler3 {

/// Fixed energy h and strength eps of the inverse-square perturbation
///
///     V_eps(q) = -sum m_i m_j / |q_i - q_j| + (eps / h) sum m_i m_j / |q_i - q_j|^2.
///
/// eps = 0 is the Newtonian problem and leaves h unconstrained.
struct EnergyParams {
    double h = -1.0;
    double eps = 0.0;

    /// Throws DomainError if eps < 0 or if eps > 0 with h >= 0.
    void validate() const;
    /// validate() plus -s/2 < h < 0, the window where the mountain-pass
    /// endpoints exist.
    void validate_mountain_pass(const CollinearGeometry& geom) const;
};

/// Functional value with its gradient in the flat coefficient layout of
/// FourierLoop (6 entries per harmonic).
struct GradedValue {
    double value = 0.0;
    std::vector<double> gradient;

    double gradient_norm() const;
};

/// Sampled trajectory of the three bodies.
struct OrbitTimeSeries {
    std::vector<double> times;
    std::vector<ConfigurationState> states;
    MassTriple masses{1.0, 1.0, 1.0};
    EnergyParams params;
    /// Integrator step, or 0 for series sampled from a Fourier loop.
    double step = 0.0;
};

/// Minimum |r| allowed on the grid by every functional evaluation.
inline constexpr double kCollisionGuard = 1e-9;

// Body-level quantities --------------------------------------------------

double kinetic_energy(const ConfigurationState& state, const MassTriple& masses);
double potential_energy(const std::array<Vec3, 3>& q, const MassTriple& masses, const EnergyParams& params);
/// F_i = -grad_{q_i} V_eps. With eps = 0 this is the Newtonian force.
std::array<Vec3, 3> forces(const std::array<Vec3, 3>& q, const MassTriple& masses, const EnergyParams& params);

// Loop functionals -------------------------------------------------------

/// Lagrangian action of the three bodies, integral of kinetic energy plus
/// sum m_i m_j / |q_i - q_j|. Evaluates both the full three-body sum and the
/// reduced form a * integral(|r'|^2/2 + (b/a)/|r|); returns the reduced one
/// and throws std::logic_error if they disagree beyond 1e-10 relative.
double action_f(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses, int grid = 0);
double action_f_full_sum(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses, int grid = 0);
double action_f_reduced(const FourierLoop& loop, const CollinearGeometry& geom, int grid = 0);

/// Reduced two-body action integral(|r'|^2/2 + (b/a)/|r|) with gradient.
GradedValue action_f1(const FourierLoop& loop, const CollinearGeometry& geom, int grid = 0);

/// Same functional with an arbitrary potential coefficient C in place of b/a.
GradedValue kepler_action(const FourierLoop& loop, double coupling, int grid = 0);

/// Pointwise V_eps(t_j) along the sampled loop, using the reduced form
/// -s/|r| + (eps/h) p/|r|^2.
std::vector<double> potential_V_eps(const SampledLoop& sampled, const CollinearGeometry& geom, const EnergyParams& params);

/// Trapezoidal integral of V_eps over one period.
double potential_integral(const FourierLoop& loop, const CollinearGeometry& geom, const EnergyParams& params, int grid = 0);

/// phi_eps(q) = (1/2) ||q||^2 integral(h - V_eps) dt, with ||q||^2 = a integral |r'|^2.
GradedValue phi_eps(const FourierLoop& loop, const CollinearGeometry& geom, const EnergyParams& params, int grid = 0);

/// sup over the series of |kinetic + V_eps - h|.
double energy_residual(const OrbitTimeSeries& series, const EnergyParams& params);

/// Least value of integral(|q'|^2/2 + C/|q|) over zero-mean T-periodic
/// curves: (3/2) (2 pi)^(2/3) C^(2/3) T^(1/3).
double kepler_lower_bound(double coupling, double period);

/// [integral sum_{i<j} m_i m_j |q_i' - q_j'|^2] / [integral sum_i m_i |q_i'|^2]
/// over the reconstructed bodies. Equals the total mass whenever the centre
/// of mass is at rest. Throws DomainError for the zero loop.
double kinetic_identity_ratio(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses,
                              int grid = 0);

/// mean(-sqrt(k)) - (-sqrt(mean(k))) >= 0, zero iff all samples are equal.
double jensen_gap(std::span<const double> samples);

}  // namespace euler3
