#include "euler3/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "euler3/errors.hpp"

namespace euler3 {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::vector<double> axpy(std::span<const double> x, double alpha, std::span<const double> d) {
    std::vector<double> out(x.begin(), x.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += alpha * d[i];
    return out;
}

// Inverse of the kinetic Hessian T w_k^2 / 2, one entry per coefficient.
std::vector<double> h1_preconditioner(const FourierLoop& loop, double scale) {
    std::vector<double> p(loop.coefficient_count());
    for (int j = 0; j < loop.harmonic_count(); ++j) {
        const double w = loop.frequency(j);
        std::fill_n(p.begin() + 6 * j, 6, 1.0 / (scale * 0.5 * loop.period() * w * w));
    }
    return p;
}

struct Evaluation {
    bool feasible = false;
    GradedValue value;
};

template <class Functional>
Evaluation try_evaluate(Functional&& f, const FourierLoop& loop) {
    try {
        return {true, f(loop)};
    } catch (const CollisionError&) {
        return {};
    }
}

// J = integral(h - V_eps), recovered from phi = ||q||^2 J / 2.
double potential_factor(const FourierLoop& loop, const CollinearGeometry& geom, double phi_value) {
    const double norm_sq = geom.a * kinetic_integral(loop);
    return norm_sq > 0.0 ? 2.0 * phi_value / norm_sq : 0.0;
}

constexpr double kNoiseFloor = 1e-13;
// Quadrature rounding of f; the value may wobble this much while the
// gradient shrinks.
constexpr double kRoundingSlack = 1e-13;

double relative_gap(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

std::string to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iterations: return "maxIterations";
        case Termination::collision_guard: return "collisionGuard";
    }
    return "unknown";
}

MinimizeResult minimize_f1(const FourierLoop& initial, const CollinearGeometry& geom, const MinimizeOptions& opts) {
    const double period = initial.period();
    auto f = [&](const FourierLoop& l) { return action_f1(l, geom, opts.grid); };

    FourierLoop loop = initial;
    GradedValue current = f(loop);  // throws CollisionError on an infeasible start
    const auto precond = h1_preconditioner(loop, 1.0);

    SolverReport report;
    report.history.push_back(current.value);
    double step = 1.0;

    while (true) {
        const double gnorm = current.gradient_norm();
        if (gnorm <= opts.tol) {
            report.reason = Termination::converged;
            break;
        }
        if (report.iterations >= opts.max_iter) {
            report.reason = Termination::max_iterations;
            break;
        }

        std::vector<double> direction(current.gradient.size());
        for (std::size_t i = 0; i < direction.size(); ++i) direction[i] = -precond[i] * current.gradient[i];
        const double slope = dot(current.gradient, direction);
        const auto x = loop.coefficients();

        // Once the predicted decrease is below the rounding level of f the
        // Armijo test is noise; the gradient norm takes over as merit.
        const bool at_noise_floor = -slope <= kNoiseFloor * std::max(1.0, std::abs(current.value));
        bool accepted = false;
        step = at_noise_floor ? 1.0 : std::min(1.0, 2.0 * step);
        while (step >= opts.line_search.min_step) {
            const auto trial_loop = FourierLoop::from_coefficients(period, axpy(x, step, direction));
            auto trial = try_evaluate(f, trial_loop);
            const bool ok = trial.feasible &&
                            (at_noise_floor ? trial.value.gradient_norm() < gnorm &&
                                                  trial.value.value <= current.value + kRoundingSlack * std::abs(current.value)
                                            : trial.value.value <= current.value + opts.line_search.armijo * step * slope);
            if (ok) {
                loop = trial_loop;
                current = std::move(trial.value);
                accepted = true;
                break;
            }
            step *= opts.line_search.shrink;
        }
        if (!accepted) {
            report.reason = Termination::collision_guard;
            break;
        }
        ++report.iterations;
        report.history.push_back(current.value);
    }

    report.final_value = current.value;
    report.final_gradient_norm = current.gradient_norm();
    return {loop, report};
}

MountainPassEndpoints build_mp_endpoints(const CollinearGeometry& geom, const EnergyParams& params, double period,
                                         int harmonic_count, int grid) {
    params.validate_mountain_pass(geom);
    const double h = params.h;
    const double s = geom.s;

    const auto unit = circle_loop(1.0, period, harmonic_count);
    MountainPassEndpoints ep{unit.scaled((h + s) / (2.0 * s)), unit, unit.scaled((-s - h) / h), (-s - h) / h,
                             (h + s) / (2.0 * s)};

    const double phi_theta = phi_eps(ep.theta, geom, params, grid).value;
    const double phi_e1 = phi_eps(ep.e1, geom, params, grid).value;
    const double phi_e = phi_eps(ep.e, geom, params, grid).value;
    if (!(ep.mu > 1.0)) throw ConvergenceError("endpoint scale mu must exceed 1");
    if (relative_gap(phi_e1, phi_e) > 1e-10) {
        throw ConvergenceError("endpoint values differ: " + std::to_string(phi_e1) + " vs " + std::to_string(phi_e));
    }
    if (!(phi_theta < phi_e1)) throw ConvergenceError("inner endpoint is not below the outer endpoints");
    return ep;
}

PathOfLoops initial_path(const MountainPassEndpoints& endpoints, int node_count) {
    if (node_count < 5) throw DomainError("a mountain-pass path needs at least 5 nodes");
    const auto n = static_cast<std::size_t>(node_count);
    const std::size_t mid = n / 2;
    const double period = endpoints.e1.period();
    const auto a = endpoints.theta.coefficients();
    const auto b = endpoints.e1.coefficients();
    const auto c = endpoints.e.coefficients();

    PathOfLoops path;
    path.anchors = {0, mid, n - 1};
    path.nodes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(a.size());
        if (i <= mid) {
            const double f = static_cast<double>(i) / static_cast<double>(mid);
            for (std::size_t k = 0; k < x.size(); ++k) x[k] = (1.0 - f) * a[k] + f * b[k];
        } else {
            const double f = static_cast<double>(i - mid) / static_cast<double>(n - 1 - mid);
            for (std::size_t k = 0; k < x.size(); ++k) x[k] = (1.0 - f) * b[k] + f * c[k];
        }
        path.nodes.push_back(FourierLoop::from_coefficients(period, x));
    }
    // Anchors are copied verbatim so they compare equal to the endpoints.
    path.nodes[0] = endpoints.theta;
    path.nodes[mid] = endpoints.e1;
    path.nodes[n - 1] = endpoints.e;
    return path;
}

namespace {

void jitter_path(PathOfLoops& path, double amplitude, std::uint64_t seed) {
    if (amplitude == 0.0) return;
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (std::size_t i = 0; i < path.nodes.size(); ++i) {
        if (path.is_anchor(i)) continue;
        auto x = path.nodes[i].coefficients();
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double index = FourierLoop::index_of(static_cast<int>(k / 6));
            x[k] += amplitude / (index * index) * (2.0 * uniform() - 1.0);
        }
        path.nodes[i] = FourierLoop::from_coefficients(path.nodes[i].period(), x);
    }
}

// Moves the interior nodes of every stretch between pinned nodes to equal
// arclength along the current polyline.
void redistribute(PathOfLoops& path, std::size_t pinned_extra) {
    std::vector<std::size_t> pinned(path.anchors.begin(), path.anchors.end());
    pinned.push_back(pinned_extra);
    std::sort(pinned.begin(), pinned.end());
    pinned.erase(std::unique(pinned.begin(), pinned.end()), pinned.end());

    const double period = path.nodes.front().period();
    for (std::size_t seg = 0; seg + 1 < pinned.size(); ++seg) {
        const std::size_t lo = pinned[seg];
        const std::size_t hi = pinned[seg + 1];
        if (hi - lo < 2) continue;

        std::vector<std::vector<double>> x;
        for (std::size_t i = lo; i <= hi; ++i) x.push_back(path.nodes[i].coefficients());
        std::vector<double> arc(x.size(), 0.0);
        for (std::size_t i = 1; i < x.size(); ++i) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < x[i].size(); ++k) d2 += (x[i][k] - x[i - 1][k]) * (x[i][k] - x[i - 1][k]);
            arc[i] = arc[i - 1] + std::sqrt(d2);
        }
        const double total = arc.back();
        if (total == 0.0) continue;

        std::size_t cursor = 0;
        for (std::size_t m = 1; m + 1 < x.size(); ++m) {
            const double target = total * static_cast<double>(m) / static_cast<double>(x.size() - 1);
            while (cursor + 1 < x.size() - 1 && arc[cursor + 1] < target) ++cursor;
            const double span = arc[cursor + 1] - arc[cursor];
            const double f = span > 0.0 ? (target - arc[cursor]) / span : 0.0;
            std::vector<double> y(x[cursor].size());
            for (std::size_t k = 0; k < y.size(); ++k) y[k] = (1.0 - f) * x[cursor][k] + f * x[cursor + 1][k];
            path.nodes[lo + m] = FourierLoop::from_coefficients(period, y);
        }
    }
}

}  // namespace

MountainPassResult mountain_pass(const MountainPassEndpoints& endpoints, const CollinearGeometry& geom,
                                 const EnergyParams& params, const MountainPassOptions& opts) {
    auto path = initial_path(endpoints, opts.path_nodes);
    jitter_path(path, opts.jitter, opts.seed);
    return mountain_pass(std::move(path), geom, params, opts);
}

MountainPassResult mountain_pass(PathOfLoops path, const CollinearGeometry& geom, const EnergyParams& params,
                                 const MountainPassOptions& opts) {
    params.validate();
    const std::size_t n = path.nodes.size();
    if (n < 5) throw DomainError("a mountain-pass path needs at least 5 nodes");
    for (std::size_t a = 0; a < 3; ++a) {
        if (path.anchors[a] >= n) throw DomainError("anchor index outside the path");
        for (std::size_t b = a + 1; b < 3; ++b) {
            if (path.anchors[a] == path.anchors[b] || path.nodes[path.anchors[a]] == path.nodes[path.anchors[b]]) {
                throw DomainError("mountain-pass anchors must be distinct loops");
            }
        }
    }

    auto f = [&](const FourierLoop& l) { return phi_eps(l, geom, params, opts.grid); };
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = f(path.nodes[i]).value;

    auto highest_interior = [&] {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (path.is_anchor(i)) continue;
            if (best == n || values[i] > values[best]) best = i;
        }
        return best;
    };

    SolverReport report;
    std::size_t top = highest_interior();
    GradedValue current = f(path.nodes[top]);
    double step = 1.0;

    while (true) {
        report.history.push_back(*std::max_element(values.begin(), values.end()));
        if (current.gradient_norm() <= opts.tol) {
            report.reason = Termination::converged;
            break;
        }
        if (report.iterations >= opts.max_iter) {
            report.reason = Termination::max_iterations;
            break;
        }

        const FourierLoop& node = path.nodes[top];
        const auto x = node.coefficients();
        const double j_factor = std::abs(potential_factor(node, geom, current.value));
        const auto precond = h1_preconditioner(node, geom.a * std::max(j_factor, 1e-12));
        std::vector<double> root(precond.size());
        for (std::size_t k = 0; k < root.size(); ++k) root[k] = std::sqrt(precond[k]);

        // Whitened gradient and path tangent.
        std::vector<double> gy(x.size());
        std::vector<double> tangent(x.size());
        const auto before = path.nodes[top - 1].coefficients();
        const auto after = path.nodes[top + 1].coefficients();
        for (std::size_t k = 0; k < x.size(); ++k) {
            gy[k] = root[k] * current.gradient[k];
            tangent[k] = (after[k] - before[k]) / root[k];
        }
        const double tnorm = norm(tangent);
        if (tnorm > 0.0) {
            for (double& t : tangent) t /= tnorm;
        }
        const double along = dot(tangent, gy);
        std::vector<double> climb(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) climb[k] = root[k] * (-gy[k] + 2.0 * along * tangent[k]);
        const double merit = dot(gy, gy);

        bool accepted = false;
        step = std::min(1.0, 2.0 * step);
        while (step >= opts.line_search.min_step) {
            const auto trial_loop = FourierLoop::from_coefficients(node.period(), axpy(x, step, climb));
            auto trial = try_evaluate(f, trial_loop);
            if (trial.feasible) {
                double trial_merit = 0.0;
                for (std::size_t k = 0; k < x.size(); ++k) {
                    const double g = root[k] * trial.value.gradient[k];
                    trial_merit += g * g;
                }
                if (trial_merit <= (1.0 - opts.line_search.armijo * step) * merit) {
                    path.nodes[top] = trial_loop;
                    current = std::move(trial.value);
                    accepted = true;
                    break;
                }
            }
            step *= opts.line_search.shrink;
        }

        if (!accepted) {
            // Plain Armijo descent on the node, as a fallback.
            std::vector<double> down(x.size());
            for (std::size_t k = 0; k < x.size(); ++k) down[k] = -precond[k] * current.gradient[k];
            const double slope = dot(current.gradient, down);
            for (double t = 1.0; t >= opts.line_search.min_step; t *= opts.line_search.shrink) {
                const auto trial_loop = FourierLoop::from_coefficients(node.period(), axpy(x, t, down));
                auto trial = try_evaluate(f, trial_loop);
                if (trial.feasible && trial.value.value <= current.value + opts.line_search.armijo * t * slope) {
                    path.nodes[top] = trial_loop;
                    current = std::move(trial.value);
                    accepted = true;
                    step = t;
                    break;
                }
            }
        }
        if (!accepted) {
            report.reason = Termination::collision_guard;
            break;
        }
        values[top] = current.value;
        ++report.iterations;

        if (opts.redistribute_every > 0 && report.iterations % opts.redistribute_every == 0) {
            redistribute(path, top);
            for (std::size_t i = 0; i < n; ++i) {
                if (!path.is_anchor(i) && i != top) values[i] = f(path.nodes[i]).value;
            }
        }

        const std::size_t next = highest_interior();
        if (next != top) {
            top = next;
            current = f(path.nodes[top]);
            step = 1.0;
        }
    }

    report.final_value = current.value;
    report.final_gradient_norm = current.gradient_norm();
    return {path.nodes[top], report, std::move(path)};
}

Rescaling rescale_to_energy(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses,
                            const EnergyParams& params, int grid) {
    params.validate();
    const double norm_sq = geom.a * kinetic_integral(loop);
    if (norm_sq == 0.0) throw DomainError("cannot rescale the zero loop");

    const auto s = sample(loop, resolve_grid(grid, loop.harmonic_count()));
    double virial = 0.0;
    for (std::size_t n = 0; n < s.r.size(); ++n) {
        if (!(euler3::norm(s.r[n]) >= kCollisionGuard)) throw CollisionError("loop collides during rescaling");
        const auto state = reconstruct_configuration(geom, s.r[n], s.rdot[n]);
        const auto force = forces(state.q, masses, params);
        for (int i = 0; i < 3; ++i) virial -= euler3::dot(force[i], state.q[i]);
    }
    const double omega_sq = virial * s.weight() / norm_sq;
    if (!(omega_sq > 0.0)) {
        throw ConvergenceError("omega^2 = " + std::to_string(omega_sq) + " is not positive; input is not a critical point");
    }
    const double omega = std::sqrt(omega_sq);
    return {omega, loop.period() / omega};
}

std::vector<ContinuationStage> continuation_in_eps(std::span<const double> schedule, double energy,
                                                   const CollinearGeometry& geom, const MassTriple& masses,
                                                   double period, int harmonic_count,
                                                   const MountainPassOptions& opts) {
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0)) throw DomainError("continuation schedule entries must be positive");
        if (i > 0 && !(schedule[i] < schedule[i - 1])) throw DomainError("continuation schedule must strictly decrease");
    }

    std::vector<ContinuationStage> stages;
    std::optional<FourierLoop> previous;
    for (double eps : schedule) {
        ContinuationStage stage{eps, false, {}, circle_loop(1.0, period, harmonic_count), {}, {}};
        const EnergyParams params{energy, eps};
        try {
            const auto endpoints = build_mp_endpoints(geom, params, period, harmonic_count, opts.grid);
            auto path = initial_path(endpoints, opts.path_nodes);
            jitter_path(path, opts.jitter, opts.seed);
            if (previous) {
                std::size_t top = path.nodes.size();
                double best = 0.0;
                for (std::size_t i = 0; i < path.nodes.size(); ++i) {
                    if (path.is_anchor(i)) continue;
                    const double v = phi_eps(path.nodes[i], geom, params, opts.grid).value;
                    if (top == path.nodes.size() || v > best) {
                        top = i;
                        best = v;
                    }
                }
                path.nodes[top] = *previous;
            }
            auto result = mountain_pass(std::move(path), geom, params, opts);
            stage.saddle = result.saddle;
            stage.report = result.report;
            if (result.report.reason != Termination::converged) {
                stage.error = "mountain-pass search stopped: " + to_string(result.report.reason);
            } else {
                stage.rescaling = rescale_to_energy(stage.saddle, geom, masses, params, opts.grid);
                stage.ok = true;
            }
        } catch (const Error& e) {
            stage.error = e.what();
        }
        stages.push_back(std::move(stage));
        if (stages.back().ok) {
            previous = stages.back().saddle;
        } else {
            previous.reset();
        }
    }
    return stages;
}

}  // namespace euler3
