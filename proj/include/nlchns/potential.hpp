#pragma once

#include <stdexcept>
#include <string>

#include "nlchns/polynomial.hpp"
#include "nlchns/spectral.hpp"

namespace nlchns {

enum class PotentialFamily { double_well, quartic, polynomial };

std::string to_string(PotentialFamily family);

/// Smooth polynomial potential F. Top degree is even with a positive leading coefficient
/// (any constant is also accepted).
struct PotentialSpec {
    PotentialFamily family = PotentialFamily::double_well;
    Polynomial F{1.0, 0.0, -2.0, 0.0, 1.0};

    /// F(s) = (1 - s^2)^2.
    static PotentialSpec double_well();
    /// F(s) = a4 s^4 + a2 s^2 + a0.
    static PotentialSpec quartic(double a4, double a2, double a0);
    /// F(s) = sum_k c_k s^k.
    static PotentialSpec polynomial(Polynomial F);

    /// The same family shape with F~(s) = F(s + m) - F(m).
    PotentialSpec shifted(double m) const;
};

/// Raised when a hypothesis required by an operation does not hold; carries the violating s.
class HypothesisError : public std::runtime_error {
public:
    HypothesisError(const std::string& what, double witness) : std::runtime_error(what), witness_(witness) {}
    double witness() const { return witness_; }

private:
    double witness_;
};

struct Range {
    double lo = -2.0;
    double hi = 2.0;
};

double eval_F(const PotentialSpec& spec, double s);
double eval_dF(const PotentialSpec& spec, double s);
double eval_ddF(const PotentialSpec& spec, double s);
ScalarField eval_F(const PotentialSpec& spec, const ScalarField& phi);
ScalarField eval_dF(const PotentialSpec& spec, const ScalarField& phi);
ScalarField eval_ddF(const PotentialSpec& spec, const ScalarField& phi);

/// F(s) = G(s) - (a*/2) s^2 + g_offset s with G convex on the range and G'(0) = 0.
struct SplitPotential {
    PotentialSpec base;
    double a_star = 0.0;
    Polynomial G;
    /// F'(0); moved out of G so that g = G' vanishes at the origin.
    double g_offset = 0.0;
    /// min of G'' = F'' + a* over the range, and where it is attained.
    double c0 = 0.0;
    double c0_witness = 0.0;
    Range range;

    double g(double s) const;
    double G_value(double s) const { return G(s); }
};

SplitPotential convex_split(const PotentialSpec& spec, double a_star, Range range);

/// (1/2) max over the range of |F''(s)|.
double stabilizer_bound(const PotentialSpec& spec, Range range);

}  // namespace nlchns
