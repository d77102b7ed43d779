#include <cmath>
#include <random>

#include "doctest.h"
#include "euler3/dynamics.hpp"
#include "euler3/errors.hpp"
#include "euler3/functionals.hpp"
#include "test_support.hpp"

using namespace euler3;
using euler3::testing::fd_gradient;
using euler3::testing::kTwoPi;
using euler3::testing::offset_random_loop;
using euler3::testing::relative_vector_error;

namespace {

const double kPi = std::numbers::pi;

// phi_eps of the circle |r| = x traversed once in T, straight from the
// definition: (1/2) a T x^2 w^2 * T (h + s/x - (eps/h) p / x^2).
double phi_circle(const CollinearGeometry& g, const EnergyParams& e, double x, double period) {
    const double w = kTwoPi / period;
    return 0.5 * g.a * period * x * x * w * w * period * (e.h + g.s / x - (e.eps / e.h) * g.p / (x * x));
}

}  // namespace

TEST_CASE("energy parameter validation") {
    CHECK_NOTHROW(EnergyParams{1.0, 0.0}.validate());
    CHECK_THROWS_AS((EnergyParams{1.0, 0.1}.validate()), DomainError);
    CHECK_THROWS_AS((EnergyParams{-1.0, -0.1}.validate()), DomainError);
    const auto g = make_geometry(MassTriple(1, 1, 1));
    CHECK_NOTHROW(EnergyParams{-1.25, 1e-3}.validate_mountain_pass(g));
    CHECK_THROWS_AS((EnergyParams{-2.5, 1e-3}.validate_mountain_pass(g)), DomainError);
    CHECK_THROWS_AS((EnergyParams{0.0, 1e-3}.validate_mountain_pass(g)), DomainError);
}

TEST_CASE("action f closed forms") {
    const auto g = make_geometry(MassTriple(1, 1, 1));
    const MassTriple m(1, 1, 1);
    CHECK(action_f(circle_loop(1.0, kTwoPi), g, m) == doctest::Approx(10.5 * kPi).epsilon(1e-14));

    for (double radius : {0.3, 1.7}) {
        for (double period : {1.0, 5.0}) {
            const double w = kTwoPi / period;
            const double expected = g.a * period * (0.5 * w * w * radius * radius + (g.b / g.a) / radius);
            CHECK(action_f(circle_loop(radius, period, 3), g, m) == doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("action f reduction identity on random loops") {
    const MassTriple masses[] = {MassTriple(1, 1, 1), MassTriple(1, 2, 3), MassTriple(0.3, 5, 0.01)};
    for (const auto& m : masses) {
        const auto g = make_geometry(m);
        for (int i = 0; i < 30; ++i) {
            const auto l = offset_random_loop(6, 50 + i, 0.4, 2.0);
            const double full = action_f_full_sum(l, g, m);
            const double reduced = action_f_reduced(l, g);
            CHECK(std::abs(full - reduced) <= 1e-10 * std::abs(reduced));
            CHECK(action_f(l, g, m) == reduced);
        }
    }
}

TEST_CASE("action f1 values and gradient") {
    const auto g = make_geometry(MassTriple(1, 1, 1));
    CHECK(action_f1(circle_loop(1.0, kTwoPi), g).value == doctest::Approx(21.0 * kPi).epsilon(1e-14));

    const auto critical = action_f1(circle_loop(std::cbrt(10.0), kTwoPi, 16), g);
    CHECK(critical.value == doctest::Approx(3.0 * kPi * std::pow(10.0, 2.0 / 3.0)).epsilon(1e-14));
    CHECK(critical.gradient_norm() <= 1e-10);
    CHECK(critical.value == doctest::Approx(kepler_lower_bound(g.b / g.a, kTwoPi)).epsilon(1e-14));

    const auto h = make_geometry(MassTriple(1, 2, 3));
    for (int i = 0; i < 20; ++i) {
        const auto l = offset_random_loop(5, 700 + i, 0.5, 3.0);
        const auto analytic = action_f1(l, h);
        const auto fd = fd_gradient(l, [&](const FourierLoop& x) { return action_f1(x, h).value; });
        CHECK(relative_vector_error(analytic.gradient, fd) <= 1e-6);
    }
}

TEST_CASE("collision guard") {
    const auto g = make_geometry(MassTriple(1, 1, 1));
    // Straight-line oscillation through the origin.
    const FourierLoop through_origin(kTwoPi, {Harmonic{{1, 0, 0}, {0, 0, 0}}});
    CHECK_THROWS_AS(action_f1(through_origin, g, 64), CollisionError);
    CHECK_THROWS_AS(phi_eps(through_origin, g, {-1.0, 1e-3}, 64), CollisionError);
    CHECK_THROWS_AS(action_f(through_origin, g, MassTriple(1, 1, 1), 64), CollisionError);
}

TEST_CASE("perturbed potential pointwise") {
    const auto g = make_geometry(MassTriple(1, 1, 1));
    const auto s = sample(circle_loop(1.0, kTwoPi), 16);
    for (double v : potential_V_eps(s, g, {-1.0, 0.0})) CHECK(v == doctest::Approx(-5.0).epsilon(1e-15));
    for (double v : potential_V_eps(s, g, {-2.0, 0.1})) CHECK(v == doctest::Approx(-5.45).epsilon(1e-15));

    // The reduced form agrees with the three-body sum.
    const MassTriple m(1, 2, 3);
    const auto h = make_geometry(m);
    const EnergyParams e{-3.0, 0.05};
    const auto l = offset_random_loop(3, 4, 0.3, 1.0);
    const auto sl = sample(l, 32);
    const auto v = potential_V_eps(sl, h, e);
    for (int j = 0; j < 32; ++j) {
        const auto st = reconstruct_configuration(h, sl.r[j], sl.rdot[j]);
        CHECK(v[j] == doctest::Approx(potential_energy(st.q, m, e)).epsilon(1e-13));
    }
}

TEST_CASE("collision trend of the perturbed potential integral") {
    const auto g = make_geometry(MassTriple(1, 1, 1));
    const EnergyParams e{-1.0, 1e-2};
    double previous = potential_integral(circle_loop(1.0, kTwoPi), g, e);
    for (int n = 2; n <= 100; ++n) {
        const double v = potential_integral(circle_loop(1.0 / n, kTwoPi), g, e);
        CHECK(v < previous);
        previous = v;
    }
    CHECK(previous < -1e3);
}

TEST_CASE("phi_eps closed form on circles and gradient") {
    const auto g = make_geometry(MassTriple(1, 1, 1));
    const FourierLoop zero(kTwoPi, std::vector<Harmonic>(3));
    const auto z = phi_eps(zero, g, {-1.25, 1e-3});
    CHECK(z.value == 0.0);

    for (double h : {-2.4, -1.25, -0.1}) {
        for (double eps : {0.0, 1e-3, 0.1}) {
            const EnergyParams e{h, eps};
            for (double x : {0.25, 1.0, 3.0}) {
                for (double period : {kTwoPi, 1.5}) {
                    const double expected = phi_circle(g, e, x, period);
                    CHECK(std::abs(phi_eps(circle_loop(x, period, 4), g, e).value - expected) <=
                          1e-12 * std::abs(expected));
                }
            }
        }
    }
    // Equal masses, T = 2 pi: pi^2 (h x^2 + s x - eps p / h).
    CHECK(phi_eps(circle_loop(2.0, kTwoPi), g, {-1.25, 1e-3}).value ==
          doctest::Approx(kPi * kPi * (-5.0 + 10.0 + 0.0072)).epsilon(1e-13));

    const auto h = make_geometry(MassTriple(1, 2, 3));
    for (int i = 0; i < 20; ++i) {
        const auto l = offset_random_loop(5, 900 + i, 0.5, 2.5);
        const EnergyParams e{-h.s / 4.0, i % 2 ? 1e-2 : 1e-3};
        const auto analytic = phi_eps(l, h, e);
        const auto fd = fd_gradient(l, [&](const FourierLoop& x) { return phi_eps(x, h, e).value; });
        CHECK(relative_vector_error(analytic.gradient, fd) <= 1e-6);
    }
}

TEST_CASE("phi_eps is positive on the sphere of radius one") {
    const auto g = make_geometry(MassTriple(1, 1, 1));
    for (double eps : {1e-2, 1e-3}) {
        const EnergyParams e{-g.s / 4.0, eps};
        int positive = 0;
        for (int i = 0; i < 500; ++i) {
            auto l = random_loop(4, 5000 + i, 1.0, kTwoPi);
            l = l.scaled(1.0 / loop_norm(l, g));
            try {
                positive += phi_eps(l, g, e).value > 0.0;
            } catch (const CollisionError&) {
                ++positive;  // the barrier: phi is +infinity at a collision
            }
        }
        CHECK(positive == 500);
    }
}

TEST_CASE("energy residual") {
    const MassTriple m(1, 1, 1);
    const auto g = make_geometry(m);
    // Circular Euler orbit R = 1, w = sqrt(10); energy 0.5 * 0.5 * 10 - 5.
    const auto l = circle_loop(1.0, kTwoPi / std::sqrt(10.0), 4);
    const EnergyParams e{-2.5, 0.0};
    CHECK(energy_residual(sample_series(l, g, m, e, 64), e) <= 1e-10);

    OrbitTimeSeries rest;
    rest.times = {0.0};
    rest.states = {reconstruct_configuration(g, {2, 0, 0}, {0, 0, 0})};
    rest.masses = m;
    CHECK(energy_residual(rest, e) <= 1e-15);  // V = -s/2 = h
    const EnergyParams other{-1.0, 0.0};
    CHECK(energy_residual(rest, other) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("kepler lower bound") {
    CHECK(kepler_lower_bound(10.0, kTwoPi) == doctest::Approx(3.0 * kPi * std::pow(10.0, 2.0 / 3.0)).epsilon(1e-15));
    CHECK(kepler_lower_bound(1.0, kTwoPi) == doctest::Approx(3.0 * kPi).epsilon(1e-15));
    const double sigma = 1.7;
    CHECK(kepler_lower_bound(sigma * sigma * sigma * 3.0, 2.0) ==
          doctest::Approx(sigma * sigma * kepler_lower_bound(3.0, 2.0)).epsilon(1e-14));

    for (double c : {1.0, 10.0}) {
        for (int i = 0; i < 300; ++i) {
            const double period = 0.5 + 0.01 * i;
            const auto l = offset_random_loop(4, 40000 + i, 0.6, period, 0.2 + 0.005 * i);
            double value;
            try {
                value = kepler_action(l, c).value;
            } catch (const CollisionError&) {
                continue;
            }
            CHECK(value >= kepler_lower_bound(c, period) - 1e-9);
        }
    }
}

TEST_CASE("kinetic identity ratio") {
    const MassTriple masses[] = {MassTriple(1, 1, 1), MassTriple(1, 2, 3), MassTriple(0.2, 7, 3)};
    for (const auto& m : masses) {
        const auto g = make_geometry(m);
        const double r1 = kinetic_identity_ratio(random_loop(4, 1, 1.0, 1.0), g, m);
        const double r2 = kinetic_identity_ratio(random_loop(6, 2, 3.0, 4.0), g, m);
        CHECK(std::abs(r1 - m.total()) <= 1e-12 * m.total());
        CHECK(std::abs(r1 - r2) <= 1e-12 * m.total());
    }
    const auto g = make_geometry(MassTriple(1, 1, 1));
    CHECK_THROWS_AS(kinetic_identity_ratio(FourierLoop(1.0, std::vector<Harmonic>(2)), g, MassTriple(1, 1, 1)),
                    DomainError);
}

TEST_CASE("jensen gap") {
    const double constant[] = {2.0, 2.0, 2.0};
    CHECK(std::abs(jensen_gap(constant)) <= 1e-15);
    const double pair[] = {1.0, 4.0};
    CHECK(jensen_gap(pair) == doctest::Approx(-1.5 + std::sqrt(2.5)).epsilon(1e-14));

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(1e-3, 100.0);
    for (int i = 0; i < 10000; ++i) {
        std::vector<double> s(2 + i % 9);
        for (auto& x : s) x = u(rng);
        CHECK(jensen_gap(s) >= 0.0);
    }
}
