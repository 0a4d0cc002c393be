#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "nlchns/spectral.hpp"

namespace testing_support {

using nlchns::Grid;
using nlchns::ScalarField;
using nlchns::VectorField;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// i.i.d. uniform samples in [-1, 1).
inline ScalarField random_field(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ScalarField f(grid);
    for (int i = 0; i < grid.n(); ++i) {
        for (int j = 0; j < grid.n(); ++j) {
            f(i, j) = dist(rng);
        }
    }
    return f;
}

/// Sum of a few random Fourier modes with |m| <= max_mode; smooth and exactly band-limited.
inline ScalarField smooth_field(const Grid& grid, std::uint64_t seed, int max_mode) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double k0 = two_pi / grid.l();
    ScalarField f(grid);
    for (int mx = -max_mode; mx <= max_mode; ++mx) {
        for (int my = -max_mode; my <= max_mode; ++my) {
            const double amp = dist(rng) / (1.0 + mx * mx + my * my);
            const double phase = std::numbers::pi * dist(rng);
            f += ScalarField::sample(grid, [&](double x, double y) {
                return amp * std::cos(k0 * (mx * x + my * y) + phase);
            });
        }
    }
    return f;
}

inline VectorField random_vector(const Grid& grid, std::uint64_t seed) {
    return VectorField(random_field(grid, seed), random_field(grid, seed + 1000003));
}

inline double max_abs(const ScalarField& f) { return f.values().abs().maxCoeff(); }

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    return (a.values() - b.values()).abs().maxCoeff();
}

/// Signed periodic offset of sample index d in [-n/2, n/2).
inline int wrap(int d, int n) {
    d %= n;
    if (d < 0) d += n;
    return d < n / 2 ? d : d - n;
}

}  // namespace testing_support
