#pragma once

#include <string>

#include "nlchns/kernel.hpp"
#include "nlchns/potential.hpp"

namespace nlchns {

struct H1Result {
    bool pass = false;
    double max_asymmetry = 0.0;  ///< max |J(x) - J(-x)| relative to max |J|
    double a = 0.0;
};

struct C0Estimate {
    bool pass = false;
    double c0 = 0.0;
    double witness = 0.0;  ///< argmin of F'' + a*
};

/// F(s) >= c1 s^2 - c2 with alpha = 2 c1 - ||J||_{L^1}.
struct H3Fit {
    bool pass = false;
    double c1 = 0.0;
    double c2 = 0.0;
    double witness = 0.0;  ///< argsup of c1 s^2 - F(s)
    double alpha = 0.0;
};

/// |F'(s)|^p <= c3 |F(s)| + c4.
struct H4Fit {
    bool pass = false;
    double p = 2.0;
    double c3 = 0.0;
    double c4 = 0.0;
    double witness = 0.0;  ///< argsup of |F'|^p - c3 |F|
};

/// F''(s) + a* >= c5 |s|^{2q} - c6, and its consequence F(s) >= c7 |s|^{2+2q} - c8.
struct H6Fit {
    bool applicable = false;
    bool pass = false;
    double q = 0.0;
    double c5 = 0.0;
    double c6 = 0.0;
    double c6_witness = 0.0;
    double c7 = 0.0;
    double c8 = 0.0;
    double c8_witness = 0.0;
};

struct HypothesisReport {
    bool h1 = false, h2 = false, h3 = false, h4 = false, h5 = true, h6 = false;
    bool h6_checked = false;
    double h1_asymmetry = 0.0;
    double c0 = 0.0, c0_witness = 0.0;
    double c1 = 0.0, c2 = 0.0, c2_witness = 0.0;
    double c3 = 0.0, c4 = 0.0, c4_witness = 0.0, p = 2.0;
    double c5 = 0.0, c6 = 0.0, c6_witness = 0.0, q = 0.0;
    double c7 = 0.0, c8 = 0.0, c8_witness = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double C_P = 0.0;
    double C_P_convex = 0.0;  ///< diam(Omega) / pi, reported for comparison only
    double a = 0.0, a_star = 0.0;
    double norm_J_l1 = 0.0, norm_gradJ_l1 = 0.0;
    double m0 = 0.0, m0_witness = 0.0;
    bool condition_altass = false;
    Range range;

    /// (H1)-(H4), plus (H6) when it was requested.
    bool all_pass() const { return h1 && h2 && h3 && h4 && h5 && (!h6_checked || h6); }
    /// The gate applied by `run`: (H1)-(H3).
    bool existence_pass() const { return h1 && h2 && h3; }
};

H1Result check_h1(const KernelOnGrid& kernel);
C0Estimate estimate_c0(const PotentialSpec& potential, double a_star, Range range);
/// m0 = -min F'' over the range; returns {m0, argmin}.
Extremum potential_concavity(const PotentialSpec& potential, Range range);
H3Fit fit_h3(const PotentialSpec& potential, double norm_J_l1);
H4Fit verify_h4(const PotentialSpec& potential, Range range);
H6Fit verify_h6(const PotentialSpec& potential, double a_star);

/// Exact Poincare-Wirtinger constant on the torus: 1 / sqrt(spectral gap) = l / (2 pi).
double poincare_constant(const Grid& grid);

struct BetaResult {
    double beta;
    bool condition;  ///< C_P < c0 / (2 ||grad J||_{L^1})
};
BetaResult compute_beta(double c0, double C_P, double norm_gradJ_l1);
BetaResult compute_beta(const HypothesisReport& report);

HypothesisReport audit(const KernelOnGrid& kernel, const PotentialSpec& potential, Range range, bool check_h6);

/// Flat `key = value` text, one entry per line.
std::string to_text(const HypothesisReport& report);

}  // namespace nlchns
