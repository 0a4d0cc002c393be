#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace nlchns {

/// Real polynomial with ascending coefficients c_0 + c_1 s + ... + c_d s^d.
class Polynomial {
public:
    Polynomial() : coeffs_(Eigen::VectorXd::Zero(1)) {}
    explicit Polynomial(Eigen::VectorXd ascending);
    Polynomial(std::initializer_list<double> ascending);

    /// Degree after dropping exactly-zero leading coefficients; the zero polynomial has degree 0.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    double leading() const { return coeffs_(degree()); }
    double coefficient(int power) const { return power <= degree() ? coeffs_(power) : 0.0; }
    const Eigen::VectorXd& coefficients() const { return coeffs_; }

    double operator()(double s) const;
    Polynomial derivative() const;
    /// p(s + shift).
    Polynomial shifted(double shift) const;
    /// Drops leading coefficients with |c| <= tol * max|c|.
    Polynomial trimmed(double tol) const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(double s) const;
    static Polynomial monomial(int power, double coefficient);

    /// Real roots (companion-matrix eigenvalues polished by Newton), ascending.
    std::vector<double> real_roots() const;

private:
    Eigen::VectorXd coeffs_;
};

struct Extremum {
    double arg;
    double value;
};

/// sup over the real line, or nullopt when the polynomial is unbounded above.
/// Evaluated at the real critical points, so it is exact up to root-finding round-off.
std::optional<Extremum> sup_over_reals(const Polynomial& p);

/// Minimum of fn on [lo, hi]: dense sampling followed by Brent refinement of the best cell.
template <typename Fn>
Extremum minimize_on_range(Fn&& fn, double lo, double hi, int samples = 4097);

}  // namespace nlchns

#include "nlchns/detail/minimize.ipp"
