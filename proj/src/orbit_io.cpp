#include "euler3/orbit_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "euler3/errors.hpp"
#include "json.hpp"

namespace euler3 {

namespace {

using nlohmann::json;

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

const json& field(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) throw SchemaError(path + ": expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + "/" + key + ": missing");
    return *it;
}

double number(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_number()) throw SchemaError(path + "/" + key + ": expected a number");
    return v.get<double>();
}

int integer(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_number_integer()) throw SchemaError(path + "/" + key + ": expected an integer");
    return v.get<int>();
}

std::string text(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_string()) throw SchemaError(path + "/" + key + ": expected a string");
    return v.get<std::string>();
}

Vec3 vec3(const json& obj, const std::string& path, const char* key) {
    const json& v = field(obj, path, key);
    if (!v.is_array() || v.size() != 3) throw SchemaError(path + "/" + key + ": expected 3 numbers");
    Vec3 out;
    for (int d = 0; d < 3; ++d) {
        if (!v[static_cast<std::size_t>(d)].is_number()) throw SchemaError(path + "/" + key + ": expected 3 numbers");
        out[d] = v[static_cast<std::size_t>(d)].get<double>();
    }
    return out;
}

json record_json(const OrbitRecord& r) {
    json harmonics = json::array();
    for (const auto& h : r.loop.indexed()) {
        harmonics.push_back({{"k", h.k}, {"cos", vec_json(h.coeffs.cos)}, {"sin", vec_json(h.coeffs.sin)}});
    }
    const auto& d = r.diagnostics;
    json diagnostics = {
        {"f", d.f},
        {"f1", d.f1},
        {"phiEps", d.phi_eps},
        {"centralConfigResidual", d.central_config_residual},
        {"eomResidualUnperturbed", d.eom_residual_unperturbed},
        {"eomResidualPerturbed", d.eom_residual_perturbed},
        {"energyResidual", d.energy_residual},
        {"closureError", d.closure_error},
        {"separationVariation", d.separation_variation},
        {"windingNumber", d.winding_number ? json(*d.winding_number) : json(nullptr)},
    };
    return {
        {"schema", kOrbitSchema},
        {"masses", json::array({r.masses.m1(), r.masses.m2(), r.masses.m3()})},
        {"period", r.loop.period()},
        {"lambda0", r.lambda0},
        {"harmonics", harmonics},
        {"solver",
         {{"kind", r.solver.kind},
          {"eps", r.solver.eps},
          {"h", r.solver.h},
          {"omega", r.solver.omega},
          {"iterations", r.solver.iterations},
          {"gradientNorm", r.solver.gradient_norm}}},
        {"diagnostics", diagnostics},
        {"discretization", {{"grid", r.grid}, {"closureSteps", r.closure_steps}}},
    };
}

OrbitRecord parse_record(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path + ": expected an object");
    if (text(j, path, "schema") != kOrbitSchema) throw SchemaError(path + "/schema: unsupported schema tag");

    const json& masses = field(j, path, "masses");
    if (!masses.is_array() || masses.size() != 3 || !std::all_of(masses.begin(), masses.end(), [](const json& m) {
            return m.is_number();
        })) {
        throw SchemaError(path + "/masses: expected 3 numbers");
    }

    OrbitRecord r;
    try {
        r.masses = MassTriple(masses[0].get<double>(), masses[1].get<double>(), masses[2].get<double>());
    } catch (const DomainError& e) {
        throw SchemaError(path + "/masses: " + e.what());
    }
    const double period = number(j, path, "period");
    r.lambda0 = number(j, path, "lambda0");

    const json& harmonics = field(j, path, "harmonics");
    if (!harmonics.is_array() || harmonics.empty()) throw SchemaError(path + "/harmonics: expected a non-empty array");
    std::vector<IndexedHarmonic> indexed;
    int previous = 0;
    for (std::size_t i = 0; i < harmonics.size(); ++i) {
        const std::string hp = path + "/harmonics/" + std::to_string(i);
        IndexedHarmonic h;
        h.k = integer(harmonics[i], hp, "k");
        if (h.k <= 0 || h.k % 2 == 0) {
            throw SchemaError(hp + "/k: harmonic k=" + std::to_string(h.k) + " is not a positive odd index");
        }
        if (h.k <= previous) throw SchemaError(hp + "/k: harmonic indices must strictly increase");
        previous = h.k;
        h.coeffs.cos = vec3(harmonics[i], hp, "cos");
        h.coeffs.sin = vec3(harmonics[i], hp, "sin");
        indexed.push_back(h);
    }
    try {
        r.loop = FourierLoop::from_indexed(period, indexed);
    } catch (const DomainError& e) {
        throw SchemaError(path + "/period: " + e.what());
    }

    const std::string sp = path + "/solver";
    const json& solver = field(j, path, "solver");
    r.solver.kind = text(solver, sp, "kind");
    if (r.solver.kind != "minimizer" && r.solver.kind != "mountain_pass") {
        throw SchemaError(sp + "/kind: expected minimizer or mountain_pass");
    }
    r.solver.eps = number(solver, sp, "eps");
    r.solver.h = number(solver, sp, "h");
    r.solver.omega = number(solver, sp, "omega");
    r.solver.iterations = integer(solver, sp, "iterations");
    r.solver.gradient_norm = number(solver, sp, "gradientNorm");

    const std::string dp = path + "/diagnostics";
    const json& d = field(j, path, "diagnostics");
    r.diagnostics.f = number(d, dp, "f");
    r.diagnostics.f1 = number(d, dp, "f1");
    r.diagnostics.phi_eps = number(d, dp, "phiEps");
    r.diagnostics.central_config_residual = number(d, dp, "centralConfigResidual");
    r.diagnostics.eom_residual_unperturbed = number(d, dp, "eomResidualUnperturbed");
    r.diagnostics.eom_residual_perturbed = number(d, dp, "eomResidualPerturbed");
    r.diagnostics.energy_residual = number(d, dp, "energyResidual");
    r.diagnostics.closure_error = number(d, dp, "closureError");
    r.diagnostics.separation_variation = number(d, dp, "separationVariation");
    const json& winding = field(d, dp, "windingNumber");
    if (winding.is_null()) {
        r.diagnostics.winding_number.reset();
    } else if (winding.is_number_integer()) {
        r.diagnostics.winding_number = winding.get<int>();
    } else {
        throw SchemaError(dp + "/windingNumber: expected an integer or null");
    }

    const std::string xp = path + "/discretization";
    const json& disc = field(j, path, "discretization");
    r.grid = integer(disc, xp, "grid");
    r.closure_steps = integer(disc, xp, "closureSteps");
    if (r.grid < minimum_grid(r.loop.harmonic_count())) throw SchemaError(xp + "/grid: undersamples the harmonics");
    if (r.closure_steps < 1) throw SchemaError(xp + "/closureSteps: must be positive");
    return r;
}

json parse_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("/: " + file.string() + " is not valid JSON (" + e.what() + ")");
    }
}

void write_text(const std::filesystem::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot write " + file.string());
    out << content;
    if (!out) throw IoError("failed writing " + file.string());
}

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fixed(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    // Avoid "-0.000000" so output does not depend on the sign of tiny zeros.
    if (std::string(buf) == "-0.000000") return "0.000000";
    return buf;
}

}  // namespace

std::string to_json(const OrbitRecord& record) { return record_json(record).dump(2) + "\n"; }

OrbitRecord record_from_json(const std::string& content) {
    json j;
    try {
        j = json::parse(content);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("/: not valid JSON (") + e.what() + ")");
    }
    return parse_record(j, "");
}

void write_orbits(const std::filesystem::path& file, std::span<const OrbitRecord> records) {
    if (records.empty()) throw IoError("no orbit records to write to " + file.string());
    json out;
    if (records.size() == 1) {
        out = record_json(records.front());
    } else {
        out = json::array();
        for (const auto& r : records) out.push_back(record_json(r));
    }
    write_text(file, out.dump(2) + "\n");
}

void write_orbit(const std::filesystem::path& file, const OrbitRecord& record) {
    write_orbits(file, std::span<const OrbitRecord>(&record, 1));
}

std::vector<OrbitRecord> read_orbits(const std::filesystem::path& file) {
    const json j = parse_file(file);
    std::vector<OrbitRecord> out;
    if (j.is_array()) {
        if (j.empty()) throw SchemaError("/: empty orbit set");
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_record(j[i], "/" + std::to_string(i)));
    } else {
        out.push_back(parse_record(j, ""));
    }
    return out;
}

OrbitRecord read_orbit(const std::filesystem::path& file) { return read_orbits(file).front(); }

std::string csv_text(const OrbitTimeSeries& series) {
    std::string out = "t";
    for (const char* kind : {"q", "v"}) {
        for (int i = 1; i <= 3; ++i) {
            for (const char* axis : {"x", "y", "z"}) out += std::string(",") + kind + std::to_string(i) + axis;
        }
    }
    out += "\n";
    for (std::size_t n = 0; n < series.states.size(); ++n) {
        const auto& s = series.states[n];
        out += g17(series.times[n]);
        for (const auto* block : {&s.q, &s.v}) {
            for (const auto& v : *block) {
                for (int d = 0; d < 3; ++d) out += "," + g17(v[d]);
            }
        }
        out += "\n";
    }
    return out;
}

void emit_csv(const OrbitTimeSeries& series, const std::filesystem::path& file) { write_text(file, csv_text(series)); }

Plane parse_plane(const std::string& name) {
    if (name == "xy") return Plane::xy;
    if (name == "xz") return Plane::xz;
    if (name == "yz") return Plane::yz;
    throw DomainError("unknown plane '" + name + "' (expected xy, xz or yz)");
}

std::string svg_text(const OrbitRecord& record, Plane plane) {
    constexpr int kSamples = 256;
    constexpr double kSize = 600.0;
    const auto geom = derived_constants(record.masses, record.lambda0);
    const auto axes = plane == Plane::xy ? std::array{0, 1} : plane == Plane::xz ? std::array{0, 2} : std::array{1, 2};

    // traces[0..2] are the bodies, traces[3] the relative curve.
    std::array<std::vector<std::array<double, 2>>, 4> traces;
    double lo_u = std::numeric_limits<double>::infinity(), hi_u = -lo_u;
    double lo_v = lo_u, hi_v = -lo_u;
    for (int n = 0; n <= kSamples; ++n) {
        const double t = record.loop.period() * (n % kSamples) / kSamples;
        const Vec3 r = record.loop.evaluate(t);
        for (int i = 0; i < 4; ++i) {
            const Vec3 p = i < 3 ? geom.c[static_cast<std::size_t>(i)] * r : r;
            const double u = p[axes[0]];
            const double v = p[axes[1]];
            traces[static_cast<std::size_t>(i)].push_back({u, v});
            lo_u = std::min(lo_u, u);
            hi_u = std::max(hi_u, u);
            lo_v = std::min(lo_v, v);
            hi_v = std::max(hi_v, v);
        }
    }
    const double extent = std::max({hi_u - lo_u, hi_v - lo_v, 1e-12}) * 1.1;
    const double cu = 0.5 * (lo_u + hi_u);
    const double cv = 0.5 * (lo_v + hi_v);
    const double scale = kSize / extent;
    auto px = [&](double u) { return fixed((u - cu) * scale + 0.5 * kSize); };
    // SVG y grows downwards.
    auto py = [&](double v) { return fixed(0.5 * kSize - (v - cv) * scale); };

    static constexpr std::array<const char*, 4> colors{"#d62728", "#1f77b4", "#2ca02c", "#7f7f7f"};
    static constexpr std::array<const char*, 4> names{"body 1", "body 2", "body 3", "r = q2 - q1"};
    const char* plane_name = plane == Plane::xy ? "xy" : plane == Plane::xz ? "xz" : "yz";

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize + 80
        << "\" viewBox=\"0 0 " << kSize << " " << kSize + 80 << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < traces.size(); ++i) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[i] << "\" stroke-width=\"1.5\""
            << (i == 3 ? " stroke-dasharray=\"4 3\"" : "") << " points=\"";
        for (std::size_t n = 0; n < traces[i].size(); ++n) {
            out << (n ? " " : "") << px(traces[i][n][0]) << "," << py(traces[i][n][1]);
        }
        out << "\"/>\n";
    }
    out << "<g font-family=\"monospace\" font-size=\"12\">\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double y = kSize + 18 + 14.0 * static_cast<double>(i % 2);
        const double x = 10.0 + 150.0 * static_cast<double>(i / 2);
        out << "<line x1=\"" << x << "\" y1=\"" << y - 4 << "\" x2=\"" << x + 20 << "\" y2=\"" << y - 4
            << "\" stroke=\"" << colors[i] << "\" stroke-width=\"2\"/>"
            << "<text x=\"" << x + 26 << "\" y=\"" << y << "\">" << names[i] << "</text>\n";
    }
    out << "<text x=\"320\" y=\"" << kSize + 18 << "\">lambda0 = " << g17(record.lambda0) << "</text>\n"
        << "<text x=\"320\" y=\"" << kSize + 32 << "\">f1 = " << g17(record.diagnostics.f1) << "</text>\n"
        << "<text x=\"320\" y=\"" << kSize + 46 << "\">plane " << plane_name << ", " << record.solver.kind
        << "</text>\n"
        << "</g>\n</svg>\n";
    return out.str();
}

void emit_svg(const OrbitRecord& record, const std::filesystem::path& file, Plane plane) {
    write_text(file, svg_text(record, plane));
}

}  // namespace euler3
