#include <doctest.h>

#include <cmath>
#include <limits>

#include "nlchns/solver.hpp"
#include "support.hpp"

using namespace nlchns;
using namespace testing_support;

namespace {

SimParams params_with(double dt, double nu, double S) {
    SimParams p;
    p.dt = dt;
    p.nu = nu;
    p.stabilizer = S;
    return p;
}

VectorField curl_of(const ScalarField& psi) {
    const VectorField g = gradient(psi);
    return VectorField(g.y(), -1.0 * g.x());
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("chemical potential of a single mode") {
    const Grid g(32, two_pi);
    const KernelOnGrid k = build_kernel(KernelSpec::gaussian(0.5, 6.0), g);
    const PotentialSpec F = PotentialSpec::polynomial(Polynomial{0.0, 0.0, 0.7});
    const ScalarField phi = ScalarField::sample(g, [](double x, double) { return std::cos(2 * x); });
    const double Jhat = k.symbol(2, 0).real();
    const ScalarField mu = chemical_potential(phi, k, F);
    CHECK(max_abs_diff(mu, (k.a - Jhat + 1.4) * phi) < 1e-12);
    CHECK(max_abs_diff(auxiliary_rho(phi, k, F), (k.a + 1.4) * phi) < 1e-12);
}

TEST_CASE("linear Cahn-Hilliard mode follows the scalar recurrence") {
    const Grid g(32, two_pi);
    const KernelOnGrid k = build_kernel(KernelSpec::gaussian(0.5, 6.0), g);
    const double a2 = 0.7;
    const PotentialSpec F = PotentialSpec::polynomial(Polynomial{0.0, 0.0, a2});
    const double dt = 1e-2, S = 3.0, A = 0.2;
    const int m = 2;
    const double k2 = m * m;
    const double Jhat = k.symbol(m, 0).real();
    const double ratio = (1 + dt * k2 * (S - 2 * a2 + Jhat)) / (1 + dt * k2 * (k.a + S));

    SimState s{ScalarField::sample(g, [&](double x, double) { return A * std::cos(m * x); }), VectorField(g), 0.0};
    const SimParams p = params_with(dt, 0.1, S);
    for (int n = 0; n < 10; ++n) {
        s = step(s, p, k, F, ForcingSpec{});
    }
    const ScalarField expected =
        ScalarField::sample(g, [&](double x, double) { return A * std::pow(ratio, 10) * std::cos(m * x); });
    CHECK(max_abs_diff(s.phi, expected) < 1e-13);
    CHECK(s.t == doctest::Approx(0.1));
}

TEST_CASE("viscous shear decays by 1 / (1 + dt nu k^2) per step") {
    const Grid g(32, two_pi);
    const KernelOnGrid k = build_kernel(KernelSpec::gaussian(0.5, 1.0), g);
    const double dt = 5e-3, nu = 0.3;
    SimState s{ScalarField(g),
               VectorField(ScalarField::sample(g, [](double, double y) { return std::sin(3 * y); }), ScalarField(g)),
               0.0};
    const SimParams p = params_with(dt, nu, 0.0);
    for (int n = 0; n < 20; ++n) {
        s = step(s, p, k, PotentialSpec::polynomial(Polynomial{0.0, 0.0, 1.0}), ForcingSpec{});
    }
    const double factor = std::pow(1.0 / (1.0 + dt * nu * 9.0), 20);
    const ScalarField expected = ScalarField::sample(g, [&](double, double y) { return factor * std::sin(3 * y); });
    CHECK(max_abs_diff(s.u.x(), expected) < 1e-14);
    CHECK(max_abs(s.u.y()) < 1e-14);
    CHECK(max_abs(s.phi) == 0.0);
}

TEST_CASE("Taylor-Green advection is a pure pressure gradient") {
    const Grid g(32, two_pi);
    const KernelOnGrid k = build_kernel(KernelSpec::gaussian(0.5, 1.0), g);
    const VectorField tg(ScalarField::sample(g, [](double x, double y) { return std::sin(x) * std::cos(y); }),
                         ScalarField::sample(g, [](double x, double y) { return -std::cos(x) * std::sin(y); }));
    const SimState s{ScalarField(g), tg, 0.0};
    const SimParams p = params_with(1e-2, 0.05, 0.0);
    const SimState next = step(s, p, k, PotentialSpec::double_well(), ForcingSpec{});
    const double factor = 1.0 / (1.0 + 1e-2 * 0.05 * 2.0);
    CHECK(max_abs_diff(next.u.x(), factor * tg.x()) < 1e-14);
    CHECK(max_abs_diff(next.u.y(), factor * tg.y()) < 1e-14);
}

TEST_CASE("a coupled step conserves mass and keeps u solenoidal") {
    const Grid g(32, 3.0);
    const KernelOnGrid k = build_kernel(KernelSpec::gaussian(0.3, 4.0), g);
    ScalarField phi = random_field(g, 1);
    phi.values() = 0.3 + 0.5 * phi.values();
    const SimState s{phi, leray_project(random_vector(g, 2)), 0.0};
    const SimParams p = params_with(1e-3, 0.1, 22.0);
    const SimState next = step(s, p, k, PotentialSpec::double_well(), ForcingSpec{});
    CHECK(std::abs(mean(next.phi) - mean(phi)) < 1e-15);
    CHECK(scaled_divergence(next.u) < 1e-13);
}

TEST_CASE("recorded chemical potential satisfies the discrete Cahn-Hilliard equation") {
    const Grid g(32, two_pi);
    const KernelOnGrid k = build_kernel(KernelSpec::gaussian(0.5, 6.0), g);
    const PotentialSpec F = PotentialSpec::double_well();
    const SimState s{0.4 * smooth_field(g, 3, 4), curl_of(smooth_field(g, 4, 3)), 0.0};
    const SimParams p = params_with(2e-3, 0.1, 22.0);
    ScalarField mu_step(g);
    const SimState next = step(s, p, k, F, ForcingSpec{}, &mu_step);

    // phi^{n+1} - phi^n = dt (lap mu^{n+1} - u^n . grad phi^n), advection 2/3-filtered.
    const VectorField gp = gradient(s.phi);
    const ScalarField adv(g, s.u.x().values() * gp.x().values() + s.u.y().values() * gp.y().values());
    SpectrumField adv_hat = dealias(transform(adv));
    adv_hat(0, 0) = 0.0;
    const ScalarField rhs = p.dt * (laplacian(mu_step) - inverse_transform(adv_hat));
    CHECK(max_abs_diff(next.phi - s.phi, rhs) < 1e-14);

    // mu^{n+1} = mu^n + (a + S)(phi^{n+1} - phi^n).
    const ScalarField mu_n = chemical_potential(s.phi, k, F);
    CHECK(max_abs_diff(mu_step, mu_n + (k.a + p.stabilizer) * (next.phi - s.phi)) < 1e-12);
}

TEST_CASE("the two capillary force forms differ by a gradient") {
    const Grid g(32, two_pi);
    const ScalarField phi = smooth_field(g, 5, 3);
    const ScalarField mu = smooth_field(g, 6, 3);
    const VectorField f1 = leray_project(korteweg_force(phi, mu, ForceForm::phi_grad_mu));
    const VectorField f2 = leray_project(korteweg_force(phi, mu, ForceForm::mu_grad_phi));
    CHECK(max_abs_diff(f1.x(), f2.x()) < 1e-12);
    CHECK(max_abs_diff(f1.y(), f2.y()) < 1e-12);
    CHECK(f1.max_abs() > 1e-3);
}

TEST_CASE("forcing families") {
    const Grid g(32, 4.0);
    ForcingSpec single;
    single.family = ForcingFamily::single_mode;
    single.amplitude = {0.8, 0.0};
    single.mode = {1, 2};
    single.decay = 0.5;
    const VectorField h0 = evaluate_forcing(single, g, 0.0);
    const VectorField h1 = evaluate_forcing(single, g, 2.0);
    CHECK(max_abs(divergence(h0)) < 1e-12);
    CHECK(max_abs_diff(h1.x(), std::exp(-1.0) * h0.x()) < 1e-14);
    CHECK(norm_l2(h0) == doctest::Approx(0.8 * std::sqrt(g.measure() / 2)).epsilon(1e-12));
    const double k2 = std::pow(two_pi / 4.0, 2) * 5;
    CHECK(forcing_dual_norm_sq(single, g) == doctest::Approx(0.64 * g.measure() / (2 * k2)).epsilon(1e-12));
    CHECK(forcing_time_integral(single, g) == doctest::Approx(0.64 * g.measure() / (2 * k2) / 1.0).epsilon(1e-12));
    CHECK(single.square_integrable());

    ForcingSpec body;
    body.family = ForcingFamily::body;
    body.amplitude = {1.0, 0.0};
    CHECK(evaluate_forcing(body, g, 1.0).x()(3, 4) == 1.0);
    CHECK(std::isinf(forcing_dual_norm_sq(body, g)));
    CHECK_FALSE(body.square_integrable());
    CHECK(forcing_time_integral(ForcingSpec{}, g) == 0.0);
}

TEST_CASE("non-finite values raise a blow-up error") {
    const Grid g(16, two_pi);
    const KernelOnGrid k = build_kernel(KernelSpec::gaussian(0.5, 1.0), g);
    ScalarField phi(g);
    phi(2, 3) = std::numeric_limits<double>::quiet_NaN();
    const SimState s{phi, VectorField(g), 0.0};
    CHECK_THROWS_AS(step(s, params_with(1e-3, 0.1, 1.0), k, PotentialSpec::double_well(), ForcingSpec{}),
                    BlowUpError);
}

TEST_CASE("scaled divergence") {
    const Grid g(16, two_pi);
    CHECK(scaled_divergence(VectorField(g)) == 0.0);
    const VectorField grad = gradient(smooth_field(g, 1, 2));
    CHECK(scaled_divergence(grad) > 1e-3);
    CHECK(scaled_divergence(leray_project(random_vector(g, 3))) < 1e-14);
}

}
