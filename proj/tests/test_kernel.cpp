#include <doctest.h>

#include <cmath>

#include "nlchns/kernel.hpp"
#include "support.hpp"

using namespace nlchns;
using namespace testing_support;

namespace {

// (J * f)(x_i) = sum_j J(x_i - x_j) f(x_j) h^2, literally.
ScalarField brute_convolution(const ScalarField& J, const ScalarField& f) {
    const Grid& g = f.grid();
    const int n = g.n();
    ScalarField out(g);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            double s = 0.0;
            for (int c = 0; c < n; ++c) {
                for (int d = 0; d < n; ++d) {
                    s += J((a - c + n) % n, (b - d + n) % n) * f(c, d);
                }
            }
            out(a, b) = s * g.cell_volume();
        }
    }
    return out;
}

// (1/4) sum_x sum_y J(x - y) (f(x) - f(y))^2 h^4.
double brute_interaction(const ScalarField& J, const ScalarField& f) {
    const Grid& g = f.grid();
    const int n = g.n();
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                for (int d = 0; d < n; ++d) {
                    const double diff = f(a, b) - f(c, d);
                    s += J((a - c + n) % n, (b - d + n) % n) * diff * diff;
                }
            }
        }
    }
    return 0.25 * s * g.cell_volume() * g.cell_volume();
}

// Composite Simpson on [lo, hi] with m (even) panels.
template <typename Fn>
double simpson(Fn&& fn, double lo, double hi, int m) {
    const double h = (hi - lo) / m;
    double s = fn(lo) + fn(hi);
    for (int k = 1; k < m; ++k) {
        s += (k % 2 ? 4.0 : 2.0) * fn(lo + k * h);
    }
    return s * h / 3.0;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("gaussian mass, symbol and gradient norm") {
    const Grid g(64, two_pi);
    const KernelOnGrid k = build_kernel(KernelSpec::gaussian(0.4, 3.0), g);
    CHECK(k.a == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(k.norm_l1 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(k.symbol(0, 0).imag() == doctest::Approx(0.0));
    // The continuum symbol is strength exp(-sigma^2 |k|^2 / 2).
    for (int m : {1, 2, 5}) {
        CHECK(k.symbol(m, 0).real() == doctest::Approx(3.0 * std::exp(-0.08 * m * m)).epsilon(1e-10));
        CHECK(k.symbol(0, m).real() == doctest::Approx(3.0 * std::exp(-0.08 * m * m)).epsilon(1e-10));
    }
    // |grad J| has a corner at the origin, so the grid sum is only second-order accurate.
    CHECK(k.grad_norm_l1 == doctest::Approx(gaussian_gradient_norm_l1(0.4, 3.0)).epsilon(2e-3));
    CHECK(gaussian_gradient_norm_l1(0.4, 3.0) ==
          doctest::Approx(2 * std::numbers::pi * simpson([](double r) {
                              return r * 3.0 / (2 * std::numbers::pi * 0.16) * std::exp(-r * r / 0.32) * r / 0.16;
                          }, 0.0, 8.0, 4000)).epsilon(1e-10));
}

TEST_CASE("symbol equals the direct sum of samples against e^{-ik.x}") {
    const Grid g(16, 4.0);
    const KernelOnGrid k = build_kernel(KernelSpec::mollifier(1.2, 2.0), g);
    const int n = g.n();
    for (int i : {0, 1, 3, 12}) {
        for (int j : {0, 2, 8}) {
            std::complex<double> sum = 0.0;
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    sum += k.samples(a, b) * std::polar(1.0, -two_pi * (i * a + j * b) / static_cast<double>(n));
                }
            }
            sum *= g.cell_volume();
            CHECK(std::abs(sum - k.symbol(i, j)) < 1e-12);
        }
    }
}

TEST_CASE("mollifier mass agrees with radial quadrature") {
    const double R = 0.9, s = 1.5;
    const double radial = 2 * std::numbers::pi * simpson([&](double r) {
        const double rho = r / R;
        return rho < 1.0 ? r * s * std::exp(-1.0 / (1.0 - rho * rho)) : 0.0;
    }, 0.0, R, 20000);
    CHECK(mollifier_mass(R, s) == doctest::Approx(radial).epsilon(1e-9));
    const KernelOnGrid k = build_kernel(KernelSpec::mollifier(R, s), Grid(128, 4.0));
    CHECK(k.a == doctest::Approx(radial).epsilon(1e-6));
}

TEST_CASE("spectral convolution equals the periodic double sum") {
    const Grid g(16, 3.0);
    const KernelOnGrid k = build_kernel(KernelSpec::gaussian(0.3, 2.0), g);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const ScalarField f = random_field(g, seed);
        const ScalarField direct = brute_convolution(k.samples, f);
        CHECK(max_abs_diff(convolve(k, f), direct) <= 1e-12 * max_abs(direct));
    }
}

TEST_CASE("interaction energy equals the double integral") {
    const Grid g(16, 2.5);
    const KernelOnGrid k = build_kernel(KernelSpec::mollifier(0.7, 1.0), g);
    for (std::uint64_t seed = 4; seed <= 6; ++seed) {
        const ScalarField f = random_field(g, seed);
        const double direct = brute_interaction(k.samples, f);
        CHECK(interaction_energy(k, f) == doctest::Approx(direct).epsilon(1e-12));
        // The equivalent form (1/2)[a ||f||^2 - (f, J * f)].
        CHECK(0.5 * (k.a * inner(f, f) - inner(f, convolve(k, f))) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("sampled kernels are symmetric") {
    const Grid g(32, 2.0);
    for (const KernelSpec& spec : {KernelSpec::gaussian(0.2, 1.0), KernelSpec::mollifier(0.6, 1.0)}) {
        const KernelOnGrid k = build_kernel(spec, g);
        const int n = g.n();
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                CHECK(k.samples(i, j) == k.samples((n - i) % n, (n - j) % n));
            }
        }
        CHECK((k.symbol.coefficients().imag().abs() < 1e-14).all());
    }
}

TEST_CASE("radially tabulated symbol") {
    const Grid g(16, two_pi);
    const KernelOnGrid k = build_kernel(KernelSpec::spectral({{0, 1.0}, {1, 0.25}}), g);
    CHECK(k.a == doctest::Approx(1.0));
    CHECK(k.norm_l1 == doctest::Approx(1.0).epsilon(1e-12));
    const ScalarField c = ScalarField::sample(g, [](double x, double) { return std::cos(x); });
    CHECK(max_abs_diff(convolve(k, c), 0.25 * c) < 1e-14);
    const ScalarField c2 = ScalarField::sample(g, [](double x, double y) { return std::cos(x + y); });
    CHECK(max_abs(convolve(k, c2)) < 1e-14);
    CHECK_THROWS_AS(build_kernel(KernelSpec::spectral({{0, 1.0}, {1, 0.5}}), g), ConfigError);
}

TEST_CASE("invalid kernel parameters are reported together") {
    const Grid g(32, 1.0);
    try {
        build_kernel(KernelSpec::gaussian(-1.0, -2.0), g);
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        CHECK(err.problems().size() == 2);
    }
    CHECK_THROWS_AS(build_kernel(KernelSpec::gaussian(0.2, 1.0), g), ConfigError);  // sigma > l/6
    CHECK_THROWS_AS(build_kernel(KernelSpec::mollifier(0.5, 1.0), g), ConfigError);
}

TEST_CASE("kernel and field on different grids") {
    const KernelOnGrid k = build_kernel(KernelSpec::gaussian(0.3, 1.0), Grid(16, two_pi));
    CHECK_THROWS_AS(convolve(k, ScalarField(Grid(32, two_pi))), StructuralError);
}

}
