#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "euler3/loop_space.hpp"

namespace euler3::testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Central differences of f over every coefficient, step h per coordinate.
inline std::vector<double> fd_gradient(const FourierLoop& loop, const std::function<double(const FourierLoop&)>& f,
                                       double h = 1e-6) {
    const auto x = loop.coefficients();
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto plus = x, minus = x;
        plus[i] += h;
        minus[i] -= h;
        g[i] = (f(FourierLoop::from_coefficients(loop.period(), plus)) -
                f(FourierLoop::from_coefficients(loop.period(), minus))) /
               (2.0 * h);
    }
    return g;
}

// ||a - b|| / max(||a||, ||b||).
inline double relative_vector_error(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff += (a[i] - b[i]) * (a[i] - b[i]);
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-300});
}

// Random loop kept well away from the origin: a dominant circle plus noise.
inline FourierLoop offset_random_loop(int harmonics, std::uint64_t seed, double amplitude, double period,
                                      double radius = 1.0) {
    auto x = random_loop(harmonics, seed, amplitude, period).coefficients();
    x[0] += radius;
    x[4] += radius;
    return FourierLoop::from_coefficients(period, x);
}

}  // namespace euler3::testing
