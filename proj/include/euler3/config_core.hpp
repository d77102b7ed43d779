#pragma once

#include <array>

#include "euler3/vec3.hpp"

namespace euler3 {

/// Three positive point masses in gravitational units (G = 1).
class MassTriple {
public:
    /// Throws DomainError unless every mass is finite and positive.
    MassTriple(double m1, double m2, double m3);

    double m1() const { return m_[0]; }
    double m2() const { return m_[1]; }
    double m3() const { return m_[2]; }
    double operator[](int i) const { return m_[static_cast<std::size_t>(i)]; }
    /// Sum of the three masses as stored.
    double total() const { return total_; }

    friend bool operator==(const MassTriple&, const MassTriple&) = default;

private:
    std::array<double, 3> m_;
    double total_;
};

/// Euler collinear ratio and every constant derived from it.
///
/// Body 3 sits between bodies 1 and 2 with q3 - q1 = lambda0 (q2 - q1). With
/// the centre of mass at the origin every body is a fixed multiple of the
/// relative vector r = q2 - q1, namely q_i = c[i] * r.
struct CollinearGeometry {
    double lambda0 = 0.5;
    /// Coefficient of 1/|r| in the reduced Newtonian potential.
    double s = 0.0;
    /// Reduced kinetic mass: sum m_i |q_i'|^2 = a |r'|^2.
    double a = 0.0;
    /// Equal to s; kept under its own name for the reduced action.
    double b = 0.0;
    /// Coefficient of 1/|r|^2 in the reduced inverse-square perturbation.
    double p = 0.0;
    std::array<double, 3> c{};
};

/// Positions and velocities of the three bodies at one instant.
struct ConfigurationState {
    std::array<Vec3, 3> q{};
    std::array<Vec3, 3> v{};
};

/// Collinear condition whose root in (0,1) is the Euler ratio:
/// (m3/l^2 + m2)/(m3 l + m2) - (m3/(1-l)^2 + m1)/(m3 (1-l) + m1).
double euler_condition_residual(double lambda, const MassTriple& masses);

/// Root of euler_condition_residual in (0,1). Bisection on (1e-9, 1 - 1e-9)
/// followed by a secant polish; |F(lambda0)| is at the rounding floor.
/// Throws ConvergenceError if no sign change is found.
double solve_lambda0(const MassTriple& masses);

/// Throws DomainError if lambda0 is outside (0,1).
CollinearGeometry derived_constants(const MassTriple& masses, double lambda0);

/// Shorthand for derived_constants(masses, solve_lambda0(masses)).
CollinearGeometry make_geometry(const MassTriple& masses);

/// q_i = c_i r, v_i = c_i rdot.
ConfigurationState reconstruct_configuration(const CollinearGeometry& geom, const Vec3& r, const Vec3& rdot);

/// Max over bodies of |F_i - lambda m_i (q_i - c0)|, normalized by max |F_i|,
/// with lambda = V/I (V the negative Newtonian potential, I the moment of
/// inertia about the centre of mass c0). Zero exactly for central
/// configurations. Throws CollisionError when two bodies are closer than
/// 1e-12 times the largest pairwise distance.
double central_config_residual(const ConfigurationState& state, const MassTriple& masses);

}  // namespace euler3
