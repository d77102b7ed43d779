#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "euler3/config_core.hpp"
#include "euler3/functionals.hpp"
#include "euler3/loop_space.hpp"

namespace euler3 {

inline constexpr const char* kOrbitSchema = "euler-collinear-orbit/1";

struct SolverMeta {
    /// "minimizer" or "mountain_pass".
    std::string kind = "minimizer";
    double eps = 0.0;
    double h = 0.0;
    /// Time rescaling; the physical orbit has period T / omega.
    double omega = 1.0;
    int iterations = 0;
    double gradient_norm = 0.0;

    friend bool operator==(const SolverMeta&, const SolverMeta&) = default;
};

struct Diagnostics {
    double f = 0.0;
    double f1 = 0.0;
    double phi_eps = 0.0;
    double central_config_residual = 0.0;
    double eom_residual_unperturbed = 0.0;
    double eom_residual_perturbed = 0.0;
    double energy_residual = 0.0;
    double closure_error = 0.0;
    double separation_variation = 0.0;
    std::optional<int> winding_number;

    friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

/// A solved loop with its provenance. `loop` carries the variational period
/// T; the physical orbit is the same curve traversed in T / omega.
struct OrbitRecord {
    MassTriple masses{1.0, 1.0, 1.0};
    double lambda0 = 0.5;
    FourierLoop loop{1.0, std::vector<Harmonic>(1)};
    SolverMeta solver;
    Diagnostics diagnostics;
    int grid = 256;
    int closure_steps = 4096;

    double period() const { return loop.period(); }
    EnergyParams params() const { return {solver.h, solver.eps}; }
    FourierLoop physical_loop() const { return loop.with_period(loop.period() / solver.omega); }

    friend bool operator==(const OrbitRecord&, const OrbitRecord&) = default;
};

/// Serialized form of one record. Numbers round-trip bit-exactly.
std::string to_json(const OrbitRecord& record);
/// Parses one record. Throws SchemaError("<json path>: <problem>").
OrbitRecord record_from_json(const std::string& text);

/// Writes a single record as an object, several as an array.
void write_orbits(const std::filesystem::path& file, std::span<const OrbitRecord> records);
void write_orbit(const std::filesystem::path& file, const OrbitRecord& record);
/// Reads an object or an array of records. Throws IoError or SchemaError.
std::vector<OrbitRecord> read_orbits(const std::filesystem::path& file);
/// First record of the file.
OrbitRecord read_orbit(const std::filesystem::path& file);

/// Header `t,q1x,...,q3z,v1x,...,v3z` then one row per instant, %.17g.
std::string csv_text(const OrbitTimeSeries& series);
void emit_csv(const OrbitTimeSeries& series, const std::filesystem::path& file);

enum class Plane { xy, xz, yz };
Plane parse_plane(const std::string& name);

/// Body traces and the relative curve over one period (256 samples), equal
/// aspect, with a legend giving lambda0 and f1.
std::string svg_text(const OrbitRecord& record, Plane plane = Plane::xy);
void emit_svg(const OrbitRecord& record, const std::filesystem::path& file, Plane plane = Plane::xy);

}  // namespace euler3
