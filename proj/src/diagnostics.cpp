#include "euler3/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "euler3/dynamics.hpp"
#include "euler3/errors.hpp"

namespace euler3 {

namespace {

// Relative agreement with a floor for values at the rounding level.
double disagreement(double stored, double recomputed) {
    const double scale = std::max(std::abs(stored), std::abs(recomputed));
    const double diff = std::abs(stored - recomputed);
    if (diff <= 1e-14) return 0.0;
    return diff / scale;
}

}  // namespace

double mean_energy(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses, int grid) {
    const auto series = sample_series(loop, geom, masses, {-1.0, 0.0}, grid);
    double sum = 0.0;
    for (const auto& s : series.states) sum += kinetic_energy(s, masses) + potential_energy(s.q, masses, {-1.0, 0.0});
    return sum / static_cast<double>(series.states.size());
}

Diagnostics compute_diagnostics(const OrbitRecord& record) {
    const auto geom = derived_constants(record.masses, record.lambda0);
    const auto params = record.params();
    const auto physical = record.physical_loop();
    const int grid = record.grid;

    Diagnostics d;
    d.f = action_f(record.loop, geom, record.masses, grid);
    d.f1 = action_f1(record.loop, geom, grid).value;
    d.phi_eps = phi_eps(record.loop, geom, params, grid).value;

    const auto s = sample(record.loop, grid);
    for (std::size_t n = 0; n < s.r.size(); ++n) {
        const auto state = reconstruct_configuration(geom, s.r[n], s.rdot[n]);
        d.central_config_residual = std::max(d.central_config_residual, central_config_residual(state, record.masses));
    }

    const auto eom = eom_residual_spectral(physical, geom, record.masses, params, grid);
    d.eom_residual_unperturbed = eom.unperturbed;
    d.eom_residual_perturbed = eom.perturbed;
    d.energy_residual = energy_residual(sample_series(physical, geom, record.masses, params, grid), params);
    d.closure_error = closure_error(physical, geom, record.masses, params, record.closure_steps);
    d.separation_variation = compare_orbits(record.loop, geom, grid).separation_variation;
    d.winding_number = winding_number(record.loop, grid);
    return d;
}

OrbitRecord minimizer_record(const MassTriple& masses, const CollinearGeometry& geom, const MinimizeResult& result,
                             int grid, int closure_steps) {
    OrbitRecord r;
    r.masses = masses;
    r.lambda0 = geom.lambda0;
    r.loop = result.loop;
    r.grid = resolve_grid(grid, result.loop.harmonic_count());
    r.closure_steps = closure_steps;
    r.solver.kind = "minimizer";
    r.solver.eps = 0.0;
    r.solver.h = mean_energy(result.loop, geom, masses, r.grid);
    r.solver.omega = 1.0;
    r.solver.iterations = result.report.iterations;
    r.solver.gradient_norm = result.report.final_gradient_norm;
    r.diagnostics = compute_diagnostics(r);
    return r;
}

OrbitRecord mountain_pass_record(const MassTriple& masses, const CollinearGeometry& geom, double energy,
                                 const ContinuationStage& stage, int grid, int closure_steps) {
    if (!stage.ok) throw ConvergenceError("cannot record a failed stage: " + stage.error);
    OrbitRecord r;
    r.masses = masses;
    r.lambda0 = geom.lambda0;
    r.loop = stage.saddle;
    r.grid = resolve_grid(grid, stage.saddle.harmonic_count());
    r.closure_steps = closure_steps;
    r.solver.kind = "mountain_pass";
    r.solver.eps = stage.eps;
    r.solver.h = energy;
    r.solver.omega = stage.rescaling.omega;
    r.solver.iterations = stage.report.iterations;
    r.solver.gradient_norm = stage.report.final_gradient_norm;
    r.diagnostics = compute_diagnostics(r);
    return r;
}

std::vector<CheckResult> verify_record(const OrbitRecord& record, const VerificationThresholds& t) {
    std::vector<CheckResult> out;
    auto at_most = [&out](std::string name, double value, double threshold) {
        out.push_back({std::move(name), value, threshold, value <= threshold});
    };
    auto failed = [&out](std::string name) {
        out.push_back({std::move(name), std::numeric_limits<double>::infinity(), 0.0, false});
    };

    const auto geom = derived_constants(record.masses, record.lambda0);
    at_most("lambda0 root", std::abs(euler_condition_residual(record.lambda0, record.masses)), t.lambda0);

    Diagnostics d;
    try {
        d = compute_diagnostics(record);
    } catch (const Error& e) {
        failed(std::string("diagnostics (") + e.what() + ")");
        return out;
    }

    const auto params = record.params();
    const double gradient = record.solver.kind == "minimizer"
                                ? action_f1(record.loop, geom, record.grid).gradient_norm()
                                : phi_eps(record.loop, geom, params, record.grid).gradient_norm();
    at_most("gradient norm", gradient, t.gradient);
    at_most("central configuration", d.central_config_residual, t.central_config);
    at_most(params.eps > 0.0 ? "eom residual (perturbed)" : "eom residual", d.eom_residual_perturbed, t.eom);
    at_most("energy residual", d.energy_residual, t.energy);
    at_most("closure error", d.closure_error, t.closure);
    if (record.solver.kind == "mountain_pass") {
        const double omega = rescale_to_energy(record.loop, geom, record.masses, params, record.grid).omega;
        at_most("stored omega", disagreement(record.solver.omega, omega), t.reproduction);
    }

    const auto& s = record.diagnostics;
    const std::pair<const char*, std::pair<double, double>> pairs[] = {
        {"stored f", {s.f, d.f}},
        {"stored f1", {s.f1, d.f1}},
        {"stored phiEps", {s.phi_eps, d.phi_eps}},
        {"stored centralConfigResidual", {s.central_config_residual, d.central_config_residual}},
        {"stored eomResidualUnperturbed", {s.eom_residual_unperturbed, d.eom_residual_unperturbed}},
        {"stored eomResidualPerturbed", {s.eom_residual_perturbed, d.eom_residual_perturbed}},
        {"stored energyResidual", {s.energy_residual, d.energy_residual}},
        {"stored closureError", {s.closure_error, d.closure_error}},
        {"stored separationVariation", {s.separation_variation, d.separation_variation}},
    };
    for (const auto& [name, values] : pairs) at_most(name, disagreement(values.first, values.second), t.reproduction);
    out.push_back({"stored windingNumber", 0.0, 0.0, s.winding_number == d.winding_number});
    return out;
}

}  // namespace euler3
