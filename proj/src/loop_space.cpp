#include "euler3/loop_space.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "euler3/errors.hpp"

namespace euler3 {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_period(double period) {
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw DomainError("period must be positive and finite");
    }
}

}  // namespace

FourierLoop::FourierLoop(double period, std::vector<Harmonic> harmonics)
    : period_(period), harmonics_(std::move(harmonics)) {
    check_period(period_);
    if (harmonics_.empty()) {
        throw DomainError("a loop needs at least one harmonic");
    }
}

FourierLoop FourierLoop::from_indexed(double period, std::span<const IndexedHarmonic> harmonics) {
    if (harmonics.empty()) {
        throw DomainError("a loop needs at least one harmonic");
    }
    int previous = 0;
    for (const auto& h : harmonics) {
        if (h.k <= 0 || h.k % 2 == 0) {
            throw DomainError("harmonic k=" + std::to_string(h.k) + " is not a positive odd index");
        }
        if (h.k <= previous) {
            throw DomainError("harmonic indices must be strictly increasing at k=" + std::to_string(h.k));
        }
        previous = h.k;
    }
    std::vector<Harmonic> dense(static_cast<std::size_t>((previous + 1) / 2));
    for (const auto& h : harmonics) dense[static_cast<std::size_t>((h.k - 1) / 2)] = h.coeffs;
    return FourierLoop(period, std::move(dense));
}

FourierLoop FourierLoop::from_coefficients(double period, std::span<const double> coefficients) {
    if (coefficients.empty() || coefficients.size() % 6 != 0) {
        throw DomainError("coefficient vector length must be a positive multiple of 6");
    }
    std::vector<Harmonic> h(coefficients.size() / 6);
    for (std::size_t j = 0; j < h.size(); ++j) {
        const double* c = coefficients.data() + 6 * j;
        h[j].cos = {c[0], c[1], c[2]};
        h[j].sin = {c[3], c[4], c[5]};
    }
    return FourierLoop(period, std::move(h));
}

double FourierLoop::frequency(int j) const { return kTwoPi * index_of(j) / period_; }

std::vector<IndexedHarmonic> FourierLoop::indexed() const {
    std::vector<IndexedHarmonic> out;
    out.reserve(harmonics_.size());
    for (int j = 0; j < harmonic_count(); ++j) out.push_back({index_of(j), harmonics_[static_cast<std::size_t>(j)]});
    return out;
}

std::vector<double> FourierLoop::coefficients() const {
    std::vector<double> c;
    c.reserve(coefficient_count());
    for (const auto& h : harmonics_) {
        c.insert(c.end(), {h.cos.x, h.cos.y, h.cos.z, h.sin.x, h.sin.y, h.sin.z});
    }
    return c;
}

FourierLoop FourierLoop::scaled(double factor) const {
    auto h = harmonics_;
    for (auto& x : h) {
        x.cos *= factor;
        x.sin *= factor;
    }
    return FourierLoop(period_, std::move(h));
}

FourierLoop FourierLoop::with_period(double period) const { return FourierLoop(period, harmonics_); }

Vec3 FourierLoop::evaluate(double t) const {
    Vec3 r;
    for (int j = 0; j < harmonic_count(); ++j) {
        const double wt = frequency(j) * t;
        const auto& h = harmonics_[static_cast<std::size_t>(j)];
        r += std::cos(wt) * h.cos + std::sin(wt) * h.sin;
    }
    return r;
}

Vec3 FourierLoop::derivative(double t) const {
    Vec3 r;
    for (int j = 0; j < harmonic_count(); ++j) {
        const double w = frequency(j);
        const auto& h = harmonics_[static_cast<std::size_t>(j)];
        r += w * (std::cos(w * t) * h.sin - std::sin(w * t) * h.cos);
    }
    return r;
}

Vec3 FourierLoop::second_derivative(double t) const {
    Vec3 r;
    for (int j = 0; j < harmonic_count(); ++j) {
        const double w = frequency(j);
        const auto& h = harmonics_[static_cast<std::size_t>(j)];
        r -= (w * w) * (std::cos(w * t) * h.cos + std::sin(w * t) * h.sin);
    }
    return r;
}

int minimum_grid(int harmonic_count) { return 4 * (2 * harmonic_count - 1); }

int default_grid(int harmonic_count) { return std::max(256, minimum_grid(harmonic_count)); }

int resolve_grid(int requested, int harmonic_count) {
    if (requested == 0) return default_grid(harmonic_count);
    if (requested < minimum_grid(harmonic_count)) {
        throw DomainError("grid of " + std::to_string(requested) + " points undersamples " +
                          std::to_string(harmonic_count) + " odd harmonics (need at least " +
                          std::to_string(minimum_grid(harmonic_count)) + ")");
    }
    return requested;
}

SampledLoop sample(const FourierLoop& loop, int grid_size) {
    resolve_grid(grid_size == 0 ? -1 : grid_size, loop.harmonic_count());

    SampledLoop s;
    s.grid_size = grid_size;
    s.period = loop.period();
    s.times.resize(static_cast<std::size_t>(grid_size));
    s.r.assign(static_cast<std::size_t>(grid_size), Vec3{});
    s.rdot.assign(static_cast<std::size_t>(grid_size), Vec3{});
    s.rddot.assign(static_cast<std::size_t>(grid_size), Vec3{});

    for (int i = 0; i < grid_size; ++i) {
        const auto n = static_cast<std::size_t>(i);
        s.times[n] = loop.period() * i / grid_size;
        for (int j = 0; j < loop.harmonic_count(); ++j) {
            // Reduce the phase exactly on the integer lattice before scaling.
            const long phase = static_cast<long>(FourierLoop::index_of(j)) * i % grid_size;
            const double angle = kTwoPi * static_cast<double>(phase) / grid_size;
            const double c = std::cos(angle);
            const double sn = std::sin(angle);
            const double w = loop.frequency(j);
            const auto& h = loop.harmonics()[static_cast<std::size_t>(j)];
            const Vec3 value = c * h.cos + sn * h.sin;
            s.r[n] += value;
            s.rdot[n] += w * (c * h.sin - sn * h.cos);
            s.rddot[n] -= (w * w) * value;
        }
    }
    return s;
}

std::vector<double> project_onto_basis(const FourierLoop& loop, const SampledLoop& grid, std::span<const Vec3> values) {
    const int m = grid.grid_size;
    std::vector<double> out(loop.coefficient_count(), 0.0);
    for (int i = 0; i < m; ++i) {
        const Vec3& g = values[static_cast<std::size_t>(i)];
        for (int j = 0; j < loop.harmonic_count(); ++j) {
            const long phase = static_cast<long>(FourierLoop::index_of(j)) * i % m;
            const double angle = kTwoPi * static_cast<double>(phase) / m;
            const double c = std::cos(angle);
            const double sn = std::sin(angle);
            double* o = out.data() + 6 * j;
            for (int d = 0; d < 3; ++d) {
                o[d] += c * g[d];
                o[3 + d] += sn * g[d];
            }
        }
    }
    for (double& x : out) x *= grid.weight();
    return out;
}

double kinetic_integral(const FourierLoop& loop) {
    double sum = 0.0;
    for (int j = 0; j < loop.harmonic_count(); ++j) {
        const double w = loop.frequency(j);
        const auto& h = loop.harmonics()[static_cast<std::size_t>(j)];
        sum += w * w * (norm2(h.cos) + norm2(h.sin));
    }
    return 0.5 * loop.period() * sum;
}

double loop_norm(const FourierLoop& loop, const CollinearGeometry& geom) {
    return std::sqrt(geom.a * kinetic_integral(loop));
}

double min_separation(const FourierLoop& loop, const CollinearGeometry& geom, int grid_size) {
    const auto s = sample(loop, resolve_grid(grid_size, loop.harmonic_count()));
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& r : s.r) smallest = std::min(smallest, norm(r));
    const double factor = std::min({geom.lambda0, 1.0 - geom.lambda0, 1.0});
    return factor * smallest;
}

std::optional<int> winding_number(const FourierLoop& loop, int grid_size) {
    const auto s = sample(loop, resolve_grid(grid_size, loop.harmonic_count()));

    // Zero-mean by construction, so the second moment is the covariance.
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    double largest_radius = 0.0;
    for (const auto& r : s.r) {
        const Eigen::Vector3d v(r.x, r.y, r.z);
        cov += v * v.transpose();
        largest_radius = std::max(largest_radius, norm(r));
    }
    if (largest_radius == 0.0) return std::nullopt;

    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    const Eigen::Vector3d values = eig.eigenvalues();
    if (values(0) > 1e-9 * values(2)) return std::nullopt;

    // Orient the plane normal deterministically so that curves in the
    // xy-plane use the usual counter-clockwise convention.
    Eigen::Vector3d normal = eig.eigenvectors().col(0);
    const double tol = 1e-12;
    if (std::abs(normal.z()) > tol) {
        if (normal.z() < 0) normal = -normal;
    } else if (std::abs(normal.y()) > tol) {
        if (normal.y() < 0) normal = -normal;
    } else if (normal.x() < 0) {
        normal = -normal;
    }
    Eigen::Vector3d e1 = eig.eigenvectors().col(2);
    Eigen::Vector3d e2 = normal.cross(e1);

    double total = 0.0;
    double previous = 0.0;
    for (std::size_t i = 0; i <= s.r.size(); ++i) {
        const Vec3& r = s.r[i % s.r.size()];
        if (norm(r) < 1e-9 * largest_radius) return std::nullopt;
        const Eigen::Vector3d v(r.x, r.y, r.z);
        const double angle = std::atan2(v.dot(e2), v.dot(e1));
        if (i > 0) {
            double step = angle - previous;
            if (step > std::numbers::pi) step -= kTwoPi;
            if (step < -std::numbers::pi) step += kTwoPi;
            total += step;
        }
        previous = angle;
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

FourierLoop random_loop(int harmonic_count, std::uint64_t seed, double amplitude, double period) {
    if (harmonic_count < 1) throw DomainError("need at least one harmonic");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<Harmonic> h(static_cast<std::size_t>(harmonic_count));
    for (int j = 0; j < harmonic_count; ++j) {
        const double k = FourierLoop::index_of(j);
        const double scale = amplitude / (k * k);
        auto& x = h[static_cast<std::size_t>(j)];
        for (int d = 0; d < 3; ++d) x.cos[d] = scale * (2.0 * uniform() - 1.0);
        for (int d = 0; d < 3; ++d) x.sin[d] = scale * (2.0 * uniform() - 1.0);
    }
    return FourierLoop(period, std::move(h));
}

FourierLoop circle_loop(double radius, double period, int harmonic_count) {
    if (harmonic_count < 1) throw DomainError("need at least one harmonic");
    std::vector<Harmonic> h(static_cast<std::size_t>(harmonic_count));
    h[0].cos = {radius, 0.0, 0.0};
    h[0].sin = {0.0, radius, 0.0};
    return FourierLoop(period, std::move(h));
}

}  // namespace euler3
