#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "euler3/config_core.hpp"
#include "euler3/functionals.hpp"
#include "euler3/loop_space.hpp"

namespace euler3 {

enum class Termination { converged, max_iterations, collision_guard };

std::string to_string(Termination t);

struct SolverReport {
    int iterations = 0;
    double final_value = 0.0;
    double final_gradient_norm = 0.0;
    /// Objective per iteration for minimization; path maximum per iteration
    /// for the mountain-pass search.
    std::vector<double> history;
    Termination reason = Termination::max_iterations;
};

/// Backtracking line-search settings shared by every solver.
struct LineSearch {
    double armijo = 1e-4;
    double shrink = 0.5;
    double min_step = 1e-14;
};

struct MinimizeOptions {
    double tol = 1e-8;
    int max_iter = 100000;
    int grid = 0;
    LineSearch line_search;
};

struct MinimizeResult {
    FourierLoop loop;
    SolverReport report;
};

/// Gradient descent on f1 over the Fourier coefficients with Armijo
/// backtracking. The search direction is the gradient in the H^1 metric of
/// the loop (each harmonic block divided by T w_k^2 / 2); steps that would
/// breach the collision guard are shrunk like any rejected step.
MinimizeResult minimize_f1(const FourierLoop& initial, const CollinearGeometry& geom, const MinimizeOptions& opts = {});

/// Three anchors of the mountain-pass path class, all multiples of the unit
/// circle u in the xy-plane: theta = x_theta u, e1 = u, e = mu u.
struct MountainPassEndpoints {
    FourierLoop theta;
    FourierLoop e1;
    FourierLoop e;
    double mu = 0.0;
    double x_theta = 0.0;
};

/// mu = (-s - h)/h and x_theta = (h + s)/(2 s). Requires -s/2 < h < 0.
/// Verifies phi(e1) = phi(e) to 1e-10 relative and phi(theta) < phi(e1);
/// throws ConvergenceError otherwise.
MountainPassEndpoints build_mp_endpoints(const CollinearGeometry& geom, const EnergyParams& params, double period,
                                         int harmonic_count = 16, int grid = 0);

/// Ordered loops joining theta, e1 and e. The anchors never move.
struct PathOfLoops {
    std::vector<FourierLoop> nodes;
    std::array<std::size_t, 3> anchors{};

    bool is_anchor(std::size_t i) const { return i == anchors[0] || i == anchors[1] || i == anchors[2]; }
};

/// Piecewise-linear path in coefficient space with the middle anchor at
/// index floor(P/2).
PathOfLoops initial_path(const MountainPassEndpoints& endpoints, int node_count);

struct MountainPassOptions {
    double tol = 1e-5;
    int max_iter = 100000;
    int path_nodes = 33;
    int redistribute_every = 10;
    /// Random perturbation of the interior nodes, amplitude jitter/k^2 per
    /// coordinate of harmonic k. Zero keeps the straight path.
    double jitter = 0.05;
    std::uint64_t seed = 1;
    int grid = 0;
    LineSearch line_search;
};

struct MountainPassResult {
    FourierLoop saddle;
    SolverReport report;
    PathOfLoops path;
};

/// Discrete mountain-pass search for phi_eps. Each iteration moves the
/// highest interior node: down the gradient across the path and up along
/// the path tangent, so the node settles on the saddle instead of sliding
/// off it. Interior nodes are redistributed to equal coefficient-space
/// arclength every redistribute_every iterations. Stops when the moved
/// node's gradient norm is at most tol.
MountainPassResult mountain_pass(const MountainPassEndpoints& endpoints, const CollinearGeometry& geom,
                                 const EnergyParams& params, const MountainPassOptions& opts = {});

/// Same search from a caller-supplied path. Throws DomainError if two
/// anchors coincide or the path is shorter than 5 nodes.
MountainPassResult mountain_pass(PathOfLoops path, const CollinearGeometry& geom, const EnergyParams& params,
                                 const MountainPassOptions& opts = {});

/// Time rescaling that turns a critical point of phi_eps into a solution at
/// energy h: omega^2 = integral(grad V_eps . q) / ||q||^2.
struct Rescaling {
    double omega = 1.0;
    double rescaled_period = 0.0;
};

/// Throws DomainError for the zero loop and ConvergenceError if omega^2 <= 0.
Rescaling rescale_to_energy(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses,
                            const EnergyParams& params, int grid = 0);

struct ContinuationStage {
    double eps = 0.0;
    bool ok = false;
    std::string error;
    FourierLoop saddle;
    SolverReport report;
    Rescaling rescaling;
};

/// Runs the mountain-pass search for each eps of a strictly decreasing
/// positive schedule, warm-starting every stage from the previous saddle.
/// A failed stage is flagged and the next one starts from scratch.
std::vector<ContinuationStage> continuation_in_eps(std::span<const double> schedule, double energy,
                                                   const CollinearGeometry& geom, const MassTriple& masses,
                                                   double period, int harmonic_count,
                                                   const MountainPassOptions& opts = {});

}  // namespace euler3
