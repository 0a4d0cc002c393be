#include "nlchns/potential.hpp"

#include <cmath>

namespace nlchns {

std::string to_string(PotentialFamily family) {
    switch (family) {
        case PotentialFamily::double_well: return "double_well";
        case PotentialFamily::quartic: return "quartic";
        case PotentialFamily::polynomial: return "polynomial";
    }
    return "unknown";
}

namespace {
void validate(const Polynomial& F) {
    if (F.degree() % 2 != 0) {
        throw std::invalid_argument("potential: top degree must be even");
    }
    if (F.degree() > 0 && !(F.leading() > 0.0)) {
        throw std::invalid_argument("potential: leading coefficient must be positive");
    }
    if (!F.coefficients().allFinite()) {
        throw std::invalid_argument("potential: coefficients must be finite");
    }
}
}  // namespace

PotentialSpec PotentialSpec::double_well() { return {PotentialFamily::double_well, Polynomial{1.0, 0.0, -2.0, 0.0, 1.0}}; }

PotentialSpec PotentialSpec::quartic(double a4, double a2, double a0) {
    if (!(a4 > 0.0)) {
        throw std::invalid_argument("quartic potential needs a4 > 0");
    }
    return {PotentialFamily::quartic, Polynomial{a0, 0.0, a2, 0.0, a4}};
}

PotentialSpec PotentialSpec::polynomial(Polynomial F) {
    validate(F);
    return {PotentialFamily::polynomial, std::move(F)};
}

PotentialSpec PotentialSpec::shifted(double m) const {
    Polynomial shifted_F = F.shifted(m) - Polynomial{F(m)};
    return {PotentialFamily::polynomial, shifted_F};
}

double eval_F(const PotentialSpec& spec, double s) { return spec.F(s); }
double eval_dF(const PotentialSpec& spec, double s) { return spec.F.derivative()(s); }
double eval_ddF(const PotentialSpec& spec, double s) { return spec.F.derivative().derivative()(s); }

namespace {
ScalarField broadcast(const Polynomial& p, const ScalarField& phi) {
    return ScalarField(phi.grid(), phi.values().unaryExpr([&p](double s) { return p(s); }));
}
}  // namespace

ScalarField eval_F(const PotentialSpec& spec, const ScalarField& phi) { return broadcast(spec.F, phi); }
ScalarField eval_dF(const PotentialSpec& spec, const ScalarField& phi) { return broadcast(spec.F.derivative(), phi); }
ScalarField eval_ddF(const PotentialSpec& spec, const ScalarField& phi) {
    return broadcast(spec.F.derivative().derivative(), phi);
}

double SplitPotential::g(double s) const { return G.derivative()(s); }

SplitPotential convex_split(const PotentialSpec& spec, double a_star, Range range) {
    const Polynomial ddF = spec.F.derivative().derivative();
    const Extremum low = minimize_on_range([&](double s) { return ddF(s) + a_star; }, range.lo, range.hi);
    if (!(low.value > 0.0)) {
        throw HypothesisError("convex split: F'' + a* = " + std::to_string(low.value) +
                                  " is not positive at s = " + std::to_string(low.arg),
                              low.arg);
    }
    SplitPotential split;
    split.base = spec;
    split.a_star = a_star;
    split.g_offset = spec.F.derivative()(0.0);
    split.G = spec.F + Polynomial::monomial(2, 0.5 * a_star) - Polynomial::monomial(1, split.g_offset);
    split.c0 = low.value;
    split.c0_witness = low.arg;
    split.range = range;
    return split;
}

double stabilizer_bound(const PotentialSpec& spec, Range range) {
    const Polynomial ddF = spec.F.derivative().derivative();
    const Extremum low = minimize_on_range([&](double s) { return ddF(s); }, range.lo, range.hi);
    const Extremum high = minimize_on_range([&](double s) { return -ddF(s); }, range.lo, range.hi);
    return 0.5 * std::max(std::abs(low.value), std::abs(high.value));
}

}  // namespace nlchns
