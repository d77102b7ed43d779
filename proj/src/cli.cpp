#include "euler3/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "euler3/diagnostics.hpp"
#include "euler3/dynamics.hpp"
#include "euler3/errors.hpp"
#include "euler3/optimize.hpp"
#include "euler3/orbit_io.hpp"

namespace euler3 {

namespace {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string short_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

MassTriple to_masses(const std::vector<double>& m) { return MassTriple(m.at(0), m.at(1), m.at(2)); }

const OrbitRecord& pick(const std::vector<OrbitRecord>& records, int index) {
    if (index < 0) return records.back();
    if (static_cast<std::size_t>(index) >= records.size()) {
        throw DomainError("record index " + std::to_string(index) + " out of range (file has " +
                          std::to_string(records.size()) + ")");
    }
    return records[static_cast<std::size_t>(index)];
}

struct Options {
    std::vector<double> masses;
    double period = 0.0;
    int harmonics = 16;
    int grid = 0;
    double tol = 0.0;
    int max_iter = 100000;
    std::string out;
    // minimize
    double radius = 1.0;
    // mountain-pass
    double energy = 0.0;
    std::vector<double> epsilons;
    int path_nodes = 33;
    std::uint64_t seed = 1;
    double jitter = 0.05;
    // file commands
    std::string file;
    int steps = 4096;
    int index = -1;
    std::string plane = "xy";
};

int cmd_lambda0(const Options& o, std::ostream& out) {
    const auto masses = to_masses(o.masses);
    const auto g = make_geometry(masses);
    out << "lambda0  " << g17(g.lambda0) << "\n"
        << "s        " << g17(g.s) << "\n"
        << "a        " << g17(g.a) << "\n"
        << "b        " << g17(g.b) << "\n";
    out << "{\"lambda0\": " << g17(g.lambda0) << ", \"s\": " << g17(g.s) << ", \"a\": " << g17(g.a)
        << ", \"b\": " << g17(g.b) << "}\n";
    return kExitOk;
}

int cmd_minimize(const Options& o, std::ostream& out, std::ostream& err) {
    const auto masses = to_masses(o.masses);
    const auto geom = make_geometry(masses);
    MinimizeOptions mo;
    mo.tol = o.tol > 0.0 ? o.tol : 1e-8;
    mo.max_iter = o.max_iter;
    mo.grid = o.grid;
    const auto initial = circle_loop(o.radius, o.period, o.harmonics);
    const auto result = minimize_f1(initial, geom, mo);
    const auto record = minimizer_record(masses, geom, result, o.grid);
    write_orbit(o.out, record);

    out << "minimize: " << to_string(result.report.reason) << " after " << result.report.iterations
        << " iterations\n"
        << "  f1           " << g17(record.diagnostics.f1) << "\n"
        << "  Kepler A     " << g17(kepler_lower_bound(geom.b / geom.a, o.period)) << "\n"
        << "  |grad f1|    " << short_num(result.report.final_gradient_norm) << "\n"
        << "  wrote " << o.out << "\n";
    if (result.report.reason != Termination::converged) {
        err << "minimize: solver did not converge (" << to_string(result.report.reason) << ")\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}

int cmd_mountain_pass(const Options& o, bool energy_given, std::ostream& out, std::ostream& err) {
    const auto masses = to_masses(o.masses);
    const auto geom = make_geometry(masses);
    const double energy = energy_given ? o.energy : -geom.s / 4.0;
    EnergyParams{energy, o.epsilons.empty() ? 0.0 : o.epsilons.front()}.validate_mountain_pass(geom);

    MountainPassOptions mo;
    mo.tol = o.tol > 0.0 ? o.tol : 1e-5;
    mo.max_iter = o.max_iter;
    mo.path_nodes = o.path_nodes;
    mo.seed = o.seed;
    mo.jitter = o.jitter;
    mo.grid = o.grid;

    const auto stages = continuation_in_eps(o.epsilons, energy, geom, masses, o.period, o.harmonics, mo);
    std::vector<OrbitRecord> records;
    bool all_ok = true;
    for (const auto& stage : stages) {
        out << "eps " << short_num(stage.eps) << ": ";
        if (!stage.ok) {
            out << "FAILED (" << stage.error << ")\n";
            all_ok = false;
            continue;
        }
        records.push_back(mountain_pass_record(masses, geom, energy, stage, o.grid));
        out << "phi " << g17(stage.report.final_value) << ", |grad| " << short_num(stage.report.final_gradient_norm)
            << ", omega " << g17(stage.rescaling.omega) << ", iterations " << stage.report.iterations << "\n";
    }
    if (!records.empty()) {
        write_orbits(o.out, records);
        out << "wrote " << records.size() << " record(s) to " << o.out << "\n";
    }
    if (!all_ok) {
        err << "mountain-pass: at least one stage did not converge\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const auto records = read_orbits(o.file);
    bool all = true;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out << "record " << i << " (" << r.solver.kind << ", eps " << short_num(r.solver.eps) << ")\n";
        for (const auto& c : verify_record(r)) {
            char line[160];
            std::snprintf(line, sizeof line, "  %-32s %-12.4g <= %-10.3g %s\n", c.name.c_str(), c.value, c.threshold,
                          c.pass ? "PASS" : "FAIL");
            out << line;
            all = all && c.pass;
        }
    }
    out << (all ? "verification PASSED\n" : "verification FAILED\n");
    return all ? kExitOk : kExitVerificationFailed;
}

int cmd_integrate(const Options& o, std::ostream& out) {
    const auto records = read_orbits(o.file);
    const auto& r = pick(records, o.index);
    const auto geom = derived_constants(r.masses, r.lambda0);
    const auto physical = r.physical_loop();
    const auto series = integrate(initial_state(physical, geom), r.masses, r.params(), o.steps, physical.period());
    const auto closure = closure_error(physical, geom, r.masses, r.params(), o.steps);
    out << "period            " << g17(physical.period()) << "\n"
        << "steps             " << o.steps << "\n"
        << "closure error     " << short_num(closure) << "\n"
        << "collinear drift   " << short_num(collinearity_drift(series, r.lambda0)) << "\n"
        << "energy residual   " << short_num(energy_residual(series, r.params())) << "\n";
    if (!o.out.empty()) {
        emit_csv(series, o.out);
        out << "wrote " << o.out << "\n";
    }
    return kExitOk;
}

int cmd_plot(const Options& o, std::ostream& out) {
    const auto records = read_orbits(o.file);
    emit_svg(pick(records, o.index), o.out, parse_plane(o.plane));
    out << "wrote " << o.out << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Variational solver and verifier for Euler collinear periodic orbits", "euler3"};
    app.require_subcommand(1);
    Options o;

    auto add_masses = [&o](CLI::App* c) {
        c->add_option("--masses", o.masses, "m1,m2,m3")->required()->delimiter(',')->expected(3);
    };

    auto* lambda0 = app.add_subcommand("lambda0", "Collinear ratio and derived constants");
    add_masses(lambda0);

    auto* minimize = app.add_subcommand("minimize", "Minimize the reduced action f1");
    add_masses(minimize);
    minimize->add_option("--period", o.period)->required();
    minimize->add_option("--harmonics", o.harmonics)->capture_default_str();
    minimize->add_option("--grid", o.grid, "quadrature points (0 = default)");
    minimize->add_option("--tol", o.tol, "gradient tolerance (default 1e-8)");
    minimize->add_option("--max-iter", o.max_iter)->capture_default_str();
    minimize->add_option("--radius", o.radius, "radius of the initial circle")->capture_default_str();
    minimize->add_option("--out", o.out)->required();

    auto* mp = app.add_subcommand("mountain-pass", "Mountain-pass saddle of phi_eps with eps continuation");
    add_masses(mp);
    mp->add_option("--period", o.period)->required();
    auto* energy_opt = mp->add_option("--energy", o.energy, "fixed energy h in (-s/2, 0); default -s/4");
    mp->add_option("--epsilon", o.epsilons, "e1[,e2,...] strictly decreasing")->required()->delimiter(',');
    mp->add_option("--path-nodes", o.path_nodes)->capture_default_str();
    mp->add_option("--harmonics", o.harmonics)->capture_default_str();
    mp->add_option("--grid", o.grid, "quadrature points (0 = default)");
    mp->add_option("--tol", o.tol, "gradient tolerance (default 1e-5)");
    mp->add_option("--max-iter", o.max_iter)->capture_default_str();
    mp->add_option("--seed", o.seed)->capture_default_str();
    mp->add_option("--jitter", o.jitter, "interior path perturbation")->capture_default_str();
    mp->add_option("--out", o.out)->required();

    auto* verify = app.add_subcommand("verify", "Recompute and check every diagnostic of an orbit file");
    verify->add_option("file", o.file)->required();

    auto* integ = app.add_subcommand("integrate", "Integrate one period from the stored orbit");
    integ->add_option("file", o.file)->required();
    integ->add_option("--steps", o.steps)->capture_default_str();
    integ->add_option("--out", o.out, "time-series CSV");
    integ->add_option("--index", o.index, "record index in an orbit set (default last)");

    auto* plot = app.add_subcommand("plot", "Draw body traces as SVG");
    plot->add_option("file", o.file)->required();
    plot->add_option("--out", o.out)->required();
    plot->add_option("--plane", o.plane)->capture_default_str();
    plot->add_option("--index", o.index, "record index in an orbit set (default last)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*lambda0) return cmd_lambda0(o, out);
        if (*minimize) return cmd_minimize(o, out, err);
        if (*mp) return cmd_mountain_pass(o, energy_opt->count() > 0, out, err);
        if (*verify) return cmd_verify(o, out);
        if (*integ) return cmd_integrate(o, out);
        if (*plot) return cmd_plot(o, out);
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const CollisionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}

}  // namespace euler3
