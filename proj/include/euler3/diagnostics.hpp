#pragma once

#include <string>
#include <vector>

#include "euler3/orbit_io.hpp"
#include "euler3/optimize.hpp"

namespace euler3 {

/// Recomputes every diagnostic of a record from its coefficients.
Diagnostics compute_diagnostics(const OrbitRecord& record);

/// Mean of kinetic + Newtonian potential along the loop's grid.
double mean_energy(const FourierLoop& loop, const CollinearGeometry& geom, const MassTriple& masses, int grid = 0);

/// Record for a minimizer of f1. The stored energy is the orbit's own mean
/// energy and omega is 1.
OrbitRecord minimizer_record(const MassTriple& masses, const CollinearGeometry& geom, const MinimizeResult& result,
                             int grid = 0, int closure_steps = 4096);

/// Record for a converged continuation stage.
OrbitRecord mountain_pass_record(const MassTriple& masses, const CollinearGeometry& geom, double energy,
                                 const ContinuationStage& stage, int grid = 0, int closure_steps = 4096);

struct VerificationThresholds {
    double lambda0 = 1e-12;
    double reproduction = 1e-10;
    double central_config = 1e-10;
    double eom = 1e-4;
    double energy = 1e-6;
    double closure = 1e-4;
    double gradient = 1e-5;
};

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

/// Physical checks on the recomputed diagnostics plus agreement of every
/// stored diagnostic with its recomputed value.
std::vector<CheckResult> verify_record(const OrbitRecord& record, const VerificationThresholds& thresholds = {});

}  // namespace euler3
