#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "euler3/config_core.hpp"
#include "euler3/vec3.hpp"

namespace euler3 {

struct Harmonic {
    Vec3 cos;
    Vec3 sin;

    friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

/// Harmonic with an explicit frequency index, as stored in orbit files.
struct IndexedHarmonic {
    int k = 1;
    Harmonic coeffs;
};

/// Relative curve r(t) = q2(t) - q1(t) as a truncated odd-harmonic Fourier
/// series:
///
///     r(t) = sum_j cos_j cos(w_j t) + sin_j sin(w_j t),  w_j = 2 pi (2j+1) / T.
///
/// Only odd indices can be represented, so r(t + T/2) = -r(t) and the mean
/// over a period vanishes for every value of this type.
///
/// The flat coefficient layout used by gradients is, per harmonic j,
/// [cos.x, cos.y, cos.z, sin.x, sin.y, sin.z] at offset 6j.
class FourierLoop {
public:
    /// harmonics[j] carries frequency index 2j+1. Throws DomainError if the
    /// period is not positive or the list is empty.
    FourierLoop(double period, std::vector<Harmonic> harmonics);

    /// Builds a loop from explicitly indexed harmonics. Indices must be odd and
    /// strictly increasing; gaps are filled with zero harmonics.
    static FourierLoop from_indexed(double period, std::span<const IndexedHarmonic> harmonics);
    static FourierLoop from_coefficients(double period, std::span<const double> coefficients);

    double period() const { return period_; }
    int harmonic_count() const { return static_cast<int>(harmonics_.size()); }
    static constexpr int index_of(int j) { return 2 * j + 1; }
    double frequency(int j) const;
    const std::vector<Harmonic>& harmonics() const { return harmonics_; }
    std::vector<IndexedHarmonic> indexed() const;

    std::vector<double> coefficients() const;
    std::size_t coefficient_count() const { return 6 * harmonics_.size(); }

    FourierLoop scaled(double factor) const;
    FourierLoop with_period(double period) const;

    Vec3 evaluate(double t) const;
    Vec3 derivative(double t) const;
    Vec3 second_derivative(double t) const;

    friend bool operator==(const FourierLoop&, const FourierLoop&) = default;

private:
    double period_;
    std::vector<Harmonic> harmonics_;
};

/// Loop values on a uniform grid t_j = j T / M together with the exact
/// first and second derivatives of the trigonometric polynomial.
struct SampledLoop {
    int grid_size = 0;
    double period = 0.0;
    std::vector<double> times;
    std::vector<Vec3> r;
    std::vector<Vec3> rdot;
    std::vector<Vec3> rddot;

    /// Trapezoidal weight T/M of each grid point.
    double weight() const { return period / grid_size; }
};

/// Smallest grid that integrates products of represented harmonics exactly.
int minimum_grid(int harmonic_count);
/// 256, or the minimum grid when that is larger.
int default_grid(int harmonic_count);
/// Replaces 0 with default_grid; validates anything else.
int resolve_grid(int requested, int harmonic_count);

/// Throws DomainError if grid_size < 4 (2K - 1).
SampledLoop sample(const FourierLoop& loop, int grid_size);

/// Trapezoidal projection of grid values g(t_j) onto every basis function:
/// entry 6j + d is the quadrature of g_d cos(w_j t), entry 6j + 3 + d of
/// g_d sin(w_j t).
std::vector<double> project_onto_basis(const FourierLoop& loop, const SampledLoop& grid, std::span<const Vec3> values);

/// Closed-form integral of |r'|^2 over one period.
double kinetic_integral(const FourierLoop& loop);

/// sqrt(a * integral |r'|^2), the mass-weighted velocity norm of the three bodies.
double loop_norm(const FourierLoop& loop, const CollinearGeometry& geom);

/// Smallest pairwise body distance on the grid; zero at a collision.
double min_separation(const FourierLoop& loop, const CollinearGeometry& geom, int grid_size);

/// Net turns of r(t) around the origin. Empty unless the loop is planar and
/// stays away from the origin.
std::optional<int> winding_number(const FourierLoop& loop, int grid_size);

/// Deterministic pseudo-random loop: each coordinate of harmonic k is uniform
/// in [-amplitude/k^2, amplitude/k^2]. Portable across standard libraries.
FourierLoop random_loop(int harmonic_count, std::uint64_t seed, double amplitude, double period);

/// Planar circle of the given radius in the xy-plane traversed once per period.
FourierLoop circle_loop(double radius, double period, int harmonic_count = 1);

}  // namespace euler3
