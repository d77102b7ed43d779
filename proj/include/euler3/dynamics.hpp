#pragma once

#include "euler3/config_core.hpp"
#include "euler3/functionals.hpp"
#include "euler3/loop_space.hpp"

namespace euler3 {

struct EomResidual {
    /// Newtonian force law.
    double unperturbed = 0.0;
    /// Forces from V_eps.
    double perturbed = 0.0;
};

/// Differentiates the loop twice spectrally and returns, for each force law,
/// sup over grid and bodies of |m_i q_i'' - F_i| divided by sup |F_i|.
EomResidual eom_residual_spectral(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses,
                                  const EnergyParams& params, int grid = 0);

/// Classical fixed-step RK4 on positions and velocities with forces from
/// V_eps (Newtonian when eps = 0). Returns every step including t = 0.
/// Throws CollisionError if a pairwise distance drops below 1e-9 times the
/// initial largest pairwise distance.
OrbitTimeSeries integrate(const ConfigurationState& initial, const MassTriple& masses, const EnergyParams& params,
                          int step_count, double final_time);

/// Body states at t = 0 of the loop.
ConfigurationState initial_state(const FourierLoop& loop, const CollinearGeometry& geom);

/// Reconstructed body states at the uniform grid of the loop.
OrbitTimeSeries sample_series(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses,
                              const EnergyParams& params, int grid = 0);

/// Integrates one period of the loop from its t = 0 state and returns
/// |x(T) - x(0)| / |x(0)| in the 18-dimensional phase space.
double closure_error(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses,
                     const EnergyParams& params, int step_count = 4096);

/// sup over instants of |q3 - q1 - lambda0 (q2 - q1)| / largest pairwise distance.
double collinearity_drift(const OrbitTimeSeries& series, double lambda0);

struct DistinctionReport {
    /// f1(candidate) minus the Kepler minimum A.
    double action_gap_f1 = 0.0;
    /// (max |r| - min |r|) / mean |r| on the grid.
    double separation_variation = 0.0;
    double kepler_minimum = 0.0;
    bool is_kepler_minimizer_like = false;
};

/// Compares a candidate with the Kepler minimizer of f1. Minimizer-like means
/// action gap <= 1e-6 A and separation variation <= 1e-6.
DistinctionReport compare_orbits(const FourierLoop& candidate, const CollinearGeometry& geom, int grid = 0);

}  // namespace euler3
