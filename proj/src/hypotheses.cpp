#include "nlchns/hypotheses.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace nlchns {

namespace {
// Strictly positive floor for constants the hypotheses require to be > 0.
constexpr double positive_floor = 1e-12;
}  // namespace

H1Result check_h1(const KernelOnGrid& kernel) {
    const Grid& grid = kernel.grid();
    const int n = grid.n();
    const RealArray& J = kernel.samples.values();
    double asym = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            asym = std::max(asym, std::abs(J(i, j) - J((n - i) % n, (n - j) % n)));
        }
    }
    const double peak = J.abs().maxCoeff();
    H1Result r;
    r.max_asymmetry = peak > 0.0 ? asym / peak : asym;
    r.a = kernel.a;
    r.pass = r.max_asymmetry <= 1e-12 && kernel.a >= 0.0 && std::isfinite(kernel.norm_l1) &&
             std::isfinite(kernel.grad_norm_l1);
    return r;
}

C0Estimate estimate_c0(const PotentialSpec& potential, double a_star, Range range) {
    const Polynomial ddF = potential.F.derivative().derivative();
    const Extremum low = minimize_on_range([&](double s) { return ddF(s) + a_star; }, range.lo, range.hi);
    return {low.value > 0.0, low.value, low.arg};
}

Extremum potential_concavity(const PotentialSpec& potential, Range range) {
    const Polynomial ddF = potential.F.derivative().derivative();
    const Extremum low = minimize_on_range([&](double s) { return ddF(s); }, range.lo, range.hi);
    return {low.arg, -low.value};
}

H3Fit fit_h3(const PotentialSpec& potential, double norm_J_l1) {
    const Polynomial& F = potential.F;
    const int degree = F.degree();
    H3Fit fit;
    const double half = 0.5 * norm_J_l1;
    if (degree >= 4) {
        fit.c1 = half + std::max(1.0, half);
    } else if (degree == 2) {
        // Quadratic F cannot absorb c1 > leading coefficient; fall back to the largest feasible c1.
        const double A = F.leading();
        fit.c1 = F.coefficient(1) == 0.0 ? A : 0.5 * (A + half);
    } else {
        fit.c1 = half + std::max(1.0, half);
        fit.c2 = std::numeric_limits<double>::infinity();
        fit.alpha = 2.0 * fit.c1 - norm_J_l1;
        return fit;
    }
    const auto sup = sup_over_reals(Polynomial::monomial(2, fit.c1) - F);
    fit.alpha = 2.0 * fit.c1 - norm_J_l1;
    if (!sup) {
        fit.c2 = std::numeric_limits<double>::infinity();
        return fit;
    }
    fit.c2 = std::max(0.0, sup->value);
    fit.witness = sup->arg;
    fit.pass = fit.alpha > 0.0;
    return fit;
}

H4Fit verify_h4(const PotentialSpec& potential, Range range) {
    const Polynomial& F = potential.F;
    const Polynomial dF = F.derivative();
    const int degree = F.degree();
    H4Fit fit;
    if (degree == 0) {
        fit = {true, 2.0, 1.0, 0.0, 0.0};
        return fit;
    }
    if (degree % 2 != 0) {
        return fit;
    }
    fit.p = static_cast<double>(degree) / (degree - 1);
    // |F'|^p / |F| tends to degree^p lead^{p-1}; take twice that so the tail is dominated.
    const double lead = F.leading();
    fit.c3 = 2.0 * std::pow(degree, fit.p) * std::pow(lead, fit.p - 1.0);
    // Beyond a few Cauchy root bounds both F and F' follow their leading terms.
    double cauchy = 0.0;
    for (int k = 0; k < degree; ++k) {
        cauchy = std::max(cauchy, std::abs(F.coefficient(k) / lead));
    }
    const double reach = 4.0 * std::max({1.0 + cauchy, std::abs(range.lo), std::abs(range.hi)});
    const double p = fit.p;
    const double c3 = fit.c3;
    const auto excess = [&](double s) { return std::pow(std::abs(dF(s)), p) - c3 * std::abs(F(s)); };
    const Extremum worst = minimize_on_range([&](double s) { return -excess(s); }, -reach, reach, 40001);
    fit.witness = worst.arg;
    fit.c4 = std::max(0.0, -worst.value);
    fit.pass = fit.p > 1.0 && fit.p <= 2.0;
    return fit;
}

H6Fit verify_h6(const PotentialSpec& potential, double a_star) {
    const Polynomial& F = potential.F;
    const int degree = F.degree();
    H6Fit fit;
    if (degree < 4) {
        return fit;
    }
    fit.applicable = true;
    const int two_q = degree - 2;
    fit.q = 0.5 * two_q;
    const Polynomial ddF = F.derivative().derivative();
    const Polynomial shifted_ddF = ddF + Polynomial{a_star};

    // c5 = full leading coefficient of F'' when lower-order terms stay bounded, else half of it.
    double c5 = ddF.leading();
    auto sup6 = sup_over_reals(Polynomial::monomial(two_q, c5) - shifted_ddF);
    if (!sup6) {
        c5 *= 0.5;
        sup6 = sup_over_reals(Polynomial::monomial(two_q, c5) - shifted_ddF);
    }
    if (!sup6) {
        return fit;
    }
    fit.c5 = c5;
    fit.c6 = std::max(sup6->value, positive_floor);
    fit.c6_witness = sup6->arg;

    // Integrating the floor twice gives c5 / ((2q+1)(2q+2)); shrink it until the remaining
    // lower-order terms of F are bounded below.
    double c7 = c5 / ((two_q + 1.0) * (two_q + 2.0));
    std::optional<Extremum> sup8;
    for (int attempt = 0; attempt < 8 && !sup8; ++attempt) {
        sup8 = sup_over_reals(Polynomial::monomial(two_q + 2, c7) - F);
        if (!sup8) {
            c7 *= 0.5;
        }
    }
    if (!sup8) {
        return fit;
    }
    fit.c7 = c7;
    fit.c8 = std::max(sup8->value, positive_floor);
    fit.c8_witness = sup8->arg;
    fit.pass = fit.c5 > 0.0 && fit.q > 0.0 && fit.c7 > 0.0;
    return fit;
}

double poincare_constant(const Grid& grid) { return grid.l() / (2.0 * std::numbers::pi); }

BetaResult compute_beta(double c0, double C_P, double norm_gradJ_l1) {
    const double gap = c0 - 2.0 * C_P * norm_gradJ_l1;
    return {gap * gap, c0 > 0.0 && gap > 0.0};
}

BetaResult compute_beta(const HypothesisReport& report) {
    return compute_beta(report.c0, report.C_P, report.norm_gradJ_l1);
}

HypothesisReport audit(const KernelOnGrid& kernel, const PotentialSpec& potential, Range range, bool check_h6) {
    HypothesisReport r;
    r.range = range;
    const KernelNorms norms = kernel_norms(kernel);
    r.a = norms.a;
    r.a_star = norms.a_star;
    r.norm_J_l1 = norms.norm_l1;
    r.norm_gradJ_l1 = norms.grad_norm_l1;

    const H1Result h1 = check_h1(kernel);
    r.h1 = h1.pass;
    r.h1_asymmetry = h1.max_asymmetry;

    const C0Estimate c0 = estimate_c0(potential, r.a_star, range);
    r.h2 = c0.pass;
    r.c0 = c0.c0;
    r.c0_witness = c0.witness;
    const Extremum m0 = potential_concavity(potential, range);
    r.m0 = m0.value;
    r.m0_witness = m0.arg;

    const H3Fit h3 = fit_h3(potential, r.norm_J_l1);
    r.h3 = h3.pass;
    r.c1 = h3.c1;
    r.c2 = h3.c2;
    r.c2_witness = h3.witness;
    r.alpha = h3.alpha;

    const H4Fit h4 = verify_h4(potential, range);
    r.h4 = h4.pass;
    r.p = h4.p;
    r.c3 = h4.c3;
    r.c4 = h4.c4;
    r.c4_witness = h4.witness;

    r.h6_checked = check_h6;
    const H6Fit h6 = verify_h6(potential, r.a_star);
    r.h6 = h6.pass;
    r.q = h6.q;
    r.c5 = h6.c5;
    r.c6 = h6.c6;
    r.c6_witness = h6.c6_witness;
    r.c7 = h6.c7;
    r.c8 = h6.c8;
    r.c8_witness = h6.c8_witness;

    r.C_P = poincare_constant(kernel.grid());
    r.C_P_convex = std::sqrt(2.0) * kernel.grid().l() / std::numbers::pi;
    const BetaResult beta = compute_beta(r);
    r.beta = beta.beta;
    r.condition_altass = beta.condition;
    return r;
}

std::string to_text(const HypothesisReport& r) {
    std::ostringstream os;
    os.precision(17);
    const auto verdict = [](bool pass) { return pass ? "PASS" : "FAIL"; };
    os << "h1 = " << verdict(r.h1) << "\n";
    os << "h2 = " << verdict(r.h2) << "\n";
    os << "h3 = " << verdict(r.h3) << "\n";
    os << "h4 = " << verdict(r.h4) << "\n";
    os << "h5 = " << verdict(r.h5) << "\n";
    os << "h6 = " << (r.h6_checked ? verdict(r.h6) : (r.h6 ? "PASS (not required)" : "FAIL (not required)")) << "\n";
    os << "h1_asymmetry = " << r.h1_asymmetry << "\n";
    os << "a = " << r.a << "\n";
    os << "a_star = " << r.a_star << "\n";
    os << "norm_J_l1 = " << r.norm_J_l1 << "\n";
    os << "norm_gradJ_l1 = " << r.norm_gradJ_l1 << "\n";
    os << "range = " << r.range.lo << ", " << r.range.hi << "\n";
    os << "m0 = " << r.m0 << "\n";
    os << "m0_witness = " << r.m0_witness << "\n";
    os << "c0 = " << r.c0 << "\n";
    os << "c0_witness = " << r.c0_witness << "\n";
    os << "c1 = " << r.c1 << "\n";
    os << "c2 = " << r.c2 << "\n";
    os << "c2_witness = " << r.c2_witness << "\n";
    os << "alpha = " << r.alpha << "\n";
    os << "p = " << r.p << "\n";
    os << "c3 = " << r.c3 << "\n";
    os << "c4 = " << r.c4 << "\n";
    os << "c4_witness = " << r.c4_witness << "\n";
    os << "q = " << r.q << "\n";
    os << "c5 = " << r.c5 << "\n";
    os << "c6 = " << r.c6 << "\n";
    os << "c6_witness = " << r.c6_witness << "\n";
    os << "c7 = " << r.c7 << "\n";
    os << "c8 = " << r.c8 << "\n";
    os << "c8_witness = " << r.c8_witness << "\n";
    os << "C_P = " << r.C_P << "\n";
    os << "C_P_convex_bound = " << r.C_P_convex << "\n";
    os << "beta = " << r.beta << "\n";
    os << "condition_altass = " << (r.condition_altass ? "true" : "false") << "\n";
    return os.str();
}

}  // namespace nlchns
