// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "euler3/cli.hpp"
#include "euler3/config_core.hpp"
#include "euler3/diagnostics.hpp"
#include "euler3/dynamics.hpp"
#include "euler3/errors.hpp"
#include "euler3/functionals.hpp"
#include "euler3/optimize.hpp"
#include "euler3/orbit_io.hpp"
#include "test_support.hpp"

using namespace euler3;
using euler3::testing::fd_gradient;
using euler3::testing::kTwoPi;
using euler3::testing::offset_random_loop;
using euler3::testing::relative_vector_error;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = EULER3_FIXTURE_DIR;
const fs::path kGolden = EULER3_GOLDEN_DIR;
const MassTriple kEqual(1, 1, 1);

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int failures = 0;

void criterion(int id, const char* title, double budget_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0.0 && seconds > budget_seconds) {
        o.pass = false;
        o.detail += (o.detail.empty() ? "" : "; ") + std::string("runtime ") + num(seconds) + " s over budget";
    }
    failures += !o.pass;
    std::printf("%s  %2d  %-38s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", id, title, seconds, o.detail.c_str());
    std::fflush(stdout);
}

OrbitTimeSeries physical_series(const OrbitRecord& r, int steps) {
    const auto geom = derived_constants(r.masses, r.lambda0);
    const auto physical = r.physical_loop();
    return integrate(initial_state(physical, geom), r.masses, r.params(), steps, physical.period());
}

}  // namespace

int main() {
    criterion(1, "lambda0 symmetry and residual", 1.0, [] {
        Outcome o;
        double worst_sym = 0.0, worst_res = 0.0;
        for (double m3 : {0.1, 1.0, 10.0}) {
            for (double m : {0.3, 1.0, 4.0}) worst_sym = std::max(worst_sym, std::abs(solve_lambda0(MassTriple(m, m, m3)) - 0.5));
        }
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> u(0.01, 100.0);
        for (int i = 0; i < 100; ++i) {
            const MassTriple m(u(rng), u(rng), u(rng));
            worst_res = std::max(worst_res, std::abs(euler_condition_residual(solve_lambda0(m), m)));
        }
        o.require(worst_sym <= 1e-12, "symmetric deviation " + num(worst_sym));
        o.require(worst_res <= 1e-13, "residual " + num(worst_res));
        o.detail = o.pass ? "max |l0-0.5| " + num(worst_sym) + ", max |F| " + num(worst_res) : o.detail;
        return o;
    });

    criterion(2, "reduction identity f", 5.0, [] {
        Outcome o;
        const MassTriple m(1, 2, 3);
        const auto g = make_geometry(m);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const auto l = offset_random_loop(8, 100 + i, 0.5, 0.5 + 0.05 * i);
            const double reduced = action_f_reduced(l, g);
            worst = std::max(worst, std::abs(action_f_full_sum(l, g, m) - reduced) / std::abs(reduced));
        }
        o.require(worst <= 1e-10, "relative gap " + num(worst));
        if (o.pass) o.detail = "max relative gap " + num(worst);
        return o;
    });

    criterion(3, "kinetic identity (M factor)", 0.0, [] {
        Outcome o;
        double worst = 0.0;
        for (const MassTriple& m : {MassTriple(1, 1, 1), MassTriple(1, 2, 3), MassTriple(0.05, 3, 11)}) {
            const auto g = make_geometry(m);
            for (int i = 0; i < 100; ++i) {
                const auto l = random_loop(6, 300 + i, 1.0 + 0.1 * i, 1.0 + 0.03 * i);
                worst = std::max(worst, std::abs(kinetic_identity_ratio(l, g, m) - m.total()));
            }
        }
        o.require(worst <= 1e-12, "deviation " + num(worst));
        if (o.pass) o.detail = "max |ratio - M| " + num(worst);
        return o;
    });

    criterion(4, "gradient correctness", 0.0, [] {
        Outcome o;
        const MassTriple m(1, 2, 3);
        const auto g = make_geometry(m);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const auto l = offset_random_loop(6, 400 + i, 0.5, 1.0 + 0.2 * i);
            const auto f1 = action_f1(l, g);
            worst = std::max(worst, relative_vector_error(
                                        f1.gradient, fd_gradient(l, [&](const FourierLoop& x) { return action_f1(x, g).value; })));
            const EnergyParams e{-g.s / 4.0, i % 2 ? 1e-2 : 1e-3};
            const auto phi = phi_eps(l, g, e);
            worst = std::max(worst, relative_vector_error(
                                        phi.gradient, fd_gradient(l, [&](const FourierLoop& x) { return phi_eps(x, g, e).value; })));
        }
        o.require(worst <= 1e-6, "relative error " + num(worst));
        if (o.pass) o.detail = "max relative error " + num(worst);
        return o;
    });

    criterion(5, "Kepler minimum of f1", 30.0, [] {
        Outcome o;
        const auto g = make_geometry(kEqual);
        const double a = 3.0 * std::numbers::pi * std::cbrt(100.0);
        const auto r = minimize_f1(circle_loop(1.0, kTwoPi, 16), g);
        const double rel = std::abs(r.report.final_value - a) / a;
        const double critical = action_f1(circle_loop(std::cbrt(10.0), kTwoPi, 16), g).gradient_norm();
        o.require(r.report.reason == Termination::converged, "solver " + to_string(r.report.reason));
        o.require(rel <= 1e-4, "relative error " + num(rel));
        o.require(critical <= 1e-10, "critical gradient " + num(critical));
        if (o.pass) {
            o.detail = "f1 " + std::to_string(r.report.final_value) + " (rel " + num(rel) + ", " +
                       std::to_string(r.report.iterations) + " it), critical |grad| " + num(critical);
        }
        return o;
    });

    criterion(6, "Kepler action lower bound", 0.0, [] {
        Outcome o;
        double worst = std::numeric_limits<double>::infinity();
        int collisions = 0;
        for (double c : {1.0, 10.0}) {
            for (int i = 0; i < 1000; ++i) {
                const double period = 0.5 + 0.005 * i;
                auto l = random_loop(5, 60000 + i, 0.2 + 0.002 * i, period);
                if (i % 2) {
                    // Near the minimizer: the critical circle plus a small perturbation.
                    const double radius = std::cbrt(c) * std::cbrt(period * period / (kTwoPi * kTwoPi));
                    l = offset_random_loop(5, 60000 + i, 1e-3 * radius, period, radius);
                }
                try {
                    worst = std::min(worst, kepler_action(l, c).value - kepler_lower_bound(c, period));
                } catch (const CollisionError&) {
                    ++collisions;
                }
            }
        }
        o.require(worst >= -1e-9, "slack " + num(worst));
        o.require(collisions < 20, std::to_string(collisions) + " loops hit the collision guard");
        if (o.pass) o.detail = "min slack " + num(worst) + " (" + std::to_string(collisions) + " collision loops skipped)";
        return o;
    });

    criterion(7, "endpoint geometry", 0.0, [] {
        Outcome o;
        const auto g = make_geometry(kEqual);
        const EnergyParams e{-g.s / 4.0, 1e-3};
        const auto ep = build_mp_endpoints(g, e, kTwoPi);
        const double vt = phi_eps(ep.theta, g, e).value;
        const double v1 = phi_eps(ep.e1, g, e).value;
        const double ve = phi_eps(ep.e, g, e).value;
        const double eq = std::abs(v1 - ve) / std::abs(v1);
        o.require(ep.mu == 3.0, "mu " + num(ep.mu));
        o.require(eq <= 1e-12, "phi(e1) vs phi(e) " + num(eq));
        o.require(v1 - vt >= 1e-6 * std::abs(v1), "theta gap " + num(v1 - vt));
        if (o.pass) o.detail = "mu 3, equality " + num(eq) + ", theta gap " + num((v1 - vt) / std::abs(v1)) + " rel";
        return o;
    });

    for (double eps : {1e-2, 1e-3}) {
        const std::string title = "mountain pass, eps " + num(eps);
        criterion(8, title.c_str(), 300.0, [eps] {
            Outcome o;
            const auto g = make_geometry(kEqual);
            const EnergyParams e{-g.s / 4.0, eps};
            const auto ep = build_mp_endpoints(g, e, kTwoPi);
            const auto r = mountain_pass(ep, g, e);
            const auto again = mountain_pass(ep, g, e);
            const double floor = phi_eps(ep.e, g, e).value - 1e-5;
            o.require(r.report.reason == Termination::converged, "solver " + to_string(r.report.reason));
            o.require(r.report.final_gradient_norm <= 1e-5, "gradient " + num(r.report.final_gradient_norm));
            o.require(r.report.final_value >= floor, "value below phi(e)");
            o.require(again.saddle == r.saddle && again.report.final_value == r.report.final_value,
                      "not deterministic under a fixed seed");
            if (o.pass) {
                o.detail = "phi " + std::to_string(r.report.final_value) + " >= " + std::to_string(floor) +
                           ", |grad| " + num(r.report.final_gradient_norm) + ", " +
                           std::to_string(r.report.iterations) + " it, deterministic";
            }
            return o;
        });
    }

    criterion(9, "verification pipeline (Euler circle)", 0.0, [] {
        Outcome o;
        const auto r = read_orbit(kFixtures / "euler_circle.json");
        const auto g = derived_constants(r.masses, r.lambda0);
        const auto loop = r.physical_loop();
        o.require(std::abs(loop.period() - kTwoPi / std::sqrt(10.0)) <= 1e-14, "fixture is not R = 1, w = sqrt(10)");
        const double eom = eom_residual_spectral(loop, g, r.masses, r.params()).unperturbed;
        const double closure = closure_error(loop, g, r.masses, r.params(), 4096);
        const double drift = collinearity_drift(physical_series(r, 4096), r.lambda0);
        double cc = 0.0;
        const auto s = sample(loop, 256);
        for (std::size_t n = 0; n < s.r.size(); ++n) {
            cc = std::max(cc, central_config_residual(reconstruct_configuration(g, s.r[n], s.rdot[n]), r.masses));
        }
        o.require(eom <= 1e-8, "eom " + num(eom));
        o.require(closure <= 1e-8, "closure " + num(closure));
        o.require(drift <= 1e-8, "drift " + num(drift));
        o.require(cc <= 1e-10, "central configuration " + num(cc));
        if (o.pass) {
            o.detail = "eom " + num(eom) + ", closure " + num(closure) + ", drift " + num(drift) + ", cc " + num(cc);
        }
        return o;
    });

    criterion(10, "rescaled saddle orbit", 0.0, [] {
        Outcome o;
        const auto g = make_geometry(kEqual);
        const double schedule[] = {1e-3};
        const auto stages = continuation_in_eps(schedule, -g.s / 4.0, g, kEqual, kTwoPi, 16);
        if (stages.empty() || !stages[0].ok) {
            o.require(false, "saddle search failed");
            return o;
        }
        const auto r = mountain_pass_record(kEqual, g, -g.s / 4.0, stages[0], 256);
        const auto physical = r.physical_loop();
        const double energy = energy_residual(sample_series(physical, g, kEqual, r.params(), 256), r.params());
        const double eom = eom_residual_spectral(physical, g, kEqual, r.params(), 256).perturbed;
        const double closure = closure_error(physical, g, kEqual, r.params(), 4096);
        o.require(energy <= 1e-6, "energy residual " + num(energy));
        o.require(eom <= 1e-4, "perturbed eom " + num(eom));
        o.require(closure <= 1e-4, "closure " + num(closure));
        if (o.pass) {
            o.detail = "omega " + std::to_string(r.solver.omega) + ", energy " + num(energy) + ", eom " + num(eom) +
                       ", closure " + num(closure);
        }
        return o;
    });

    criterion(11, "minimizer vs saddle distinction", 0.0, [] {
        Outcome o;
        const auto minimizer = read_orbit(kFixtures / "kepler_minimizer.json");
        const auto saddle = read_orbit(kFixtures / "mountain_pass_eps1e-3.json");
        const auto gm = derived_constants(minimizer.masses, minimizer.lambda0);
        const auto gs = derived_constants(saddle.masses, saddle.lambda0);
        const auto dm = compare_orbits(minimizer.loop, gm, minimizer.grid);
        const auto ds = compare_orbits(saddle.loop, gs, saddle.grid);
        o.require(dm.is_kepler_minimizer_like, "minimizer not classified as Kepler-like");
        o.require(!ds.is_kepler_minimizer_like, "saddle classified as Kepler-like");
        o.require(ds.separation_variation > 1e-3 || ds.action_gap_f1 > 1e-6 * ds.kepler_minimum,
                  "no distinction certificate");
        if (o.pass) {
            o.detail = "minimizer gap " + num(dm.action_gap_f1) + "; saddle gap " + num(ds.action_gap_f1) +
                       " (A " + num(ds.kepler_minimum) + "), sep var " + num(ds.separation_variation);
        }
        return o;
    });

    criterion(12, "collision trend of V_eps", 0.0, [] {
        Outcome o;
        const auto g = make_geometry(kEqual);
        const EnergyParams e{-1.0, 1e-2};
        double previous = 0.0, last = 0.0;
        bool decreasing = true;
        for (int n = 1; n <= 100; ++n) {
            last = potential_integral(circle_loop(1.0 / n, kTwoPi), g, e);
            if (n > 1 && !(last < previous)) decreasing = false;
            previous = last;
        }
        o.require(decreasing, "not strictly decreasing");
        o.require(last < -1e3, "final value " + num(last));
        if (o.pass) o.detail = "strictly decreasing to " + num(last);
        return o;
    });

    criterion(13, "orbit I/O, verify, golden files", 0.0, [] {
        Outcome o;
        int files = 0;
        const auto dir = fs::temp_directory_path() / "euler3_acceptance";
        fs::create_directories(dir);
        for (const auto& entry : fs::directory_iterator(kFixtures)) {
            ++files;
            const auto records = read_orbits(entry.path());
            const auto copy = dir / entry.path().filename();
            write_orbits(copy, records);
            o.require(read_orbits(copy) == records, "round trip differs: " + entry.path().filename().string());
            std::ostringstream out, err;
            const int code = run_cli({"verify", entry.path().string()}, out, err);
            o.require(code == kExitOk, "verify exit " + std::to_string(code) + ": " + entry.path().filename().string());
        }
        o.require(files >= 3, "too few fixtures");

        const auto circle = read_orbit(kFixtures / "euler_circle.json");
        const auto saddle = read_orbit(kFixtures / "mountain_pass_eps1e-3.json");
        for (int run = 0; run < 2; ++run) {
            const auto csv = dir / ("series" + std::to_string(run) + ".csv");
            const auto svg1 = dir / ("circle" + std::to_string(run) + ".svg");
            const auto svg2 = dir / ("saddle" + std::to_string(run) + ".svg");
            emit_csv(physical_series(circle, 64), csv);
            emit_svg(circle, svg1);
            emit_svg(saddle, svg2, Plane::xz);
            o.require(slurp(csv) == slurp(kGolden / "euler_circle_64.csv"), "CSV differs from golden");
            o.require(slurp(svg1) == slurp(kGolden / "euler_circle.svg"), "circle SVG differs from golden");
            o.require(slurp(svg2) == slurp(kGolden / "mountain_pass_xz.svg"), "saddle SVG differs from golden");
        }
        if (o.pass) o.detail = std::to_string(files) + " fixtures round-trip and verify; 3 golden files byte-identical";
        return o;
    });

    std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
