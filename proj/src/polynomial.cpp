#include "nlchns/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace nlchns {

namespace {
Eigen::VectorXd drop_zero_leading(Eigen::VectorXd c) {
    Eigen::Index size = c.size();
    while (size > 1 && c(size - 1) == 0.0) {
        --size;
    }
    if (size == 0) {
        return Eigen::VectorXd::Zero(1);
    }
    return c.head(size);
}
}  // namespace

Polynomial::Polynomial(Eigen::VectorXd ascending) : coeffs_(drop_zero_leading(std::move(ascending))) {}

Polynomial::Polynomial(std::initializer_list<double> ascending)
    : Polynomial(Eigen::Map<const Eigen::VectorXd>(ascending.begin(), static_cast<Eigen::Index>(ascending.size()))) {}

double Polynomial::operator()(double s) const {
    double acc = 0.0;
    for (Eigen::Index k = coeffs_.size() - 1; k >= 0; --k) {
        acc = acc * s + coeffs_(k);
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (degree() == 0) {
        return Polynomial();
    }
    Eigen::VectorXd d(degree());
    for (int k = 1; k <= degree(); ++k) {
        d(k - 1) = k * coeffs_(k);
    }
    return Polynomial(d);
}

Polynomial Polynomial::shifted(double shift) const {
    // Horner in polynomial arithmetic: q = (...(c_d (s+m) + c_{d-1})(s+m) + ...) + c_0.
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(coeffs_.size());
    for (Eigen::Index k = coeffs_.size() - 1; k >= 0; --k) {
        Eigen::VectorXd next = Eigen::VectorXd::Zero(coeffs_.size());
        for (Eigen::Index j = 0; j + 1 < acc.size(); ++j) {
            next(j + 1) += acc(j);
        }
        next += shift * acc;
        next(0) += coeffs_(k);
        acc = next;
    }
    return Polynomial(acc);
}

Polynomial Polynomial::trimmed(double tol) const {
    const double scale = coeffs_.cwiseAbs().maxCoeff();
    Eigen::Index size = coeffs_.size();
    while (size > 1 && std::abs(coeffs_(size - 1)) <= tol * scale) {
        --size;
    }
    return Polynomial(Eigen::VectorXd(coeffs_.head(size)));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    const Eigen::Index size = std::max(coeffs_.size(), other.coeffs_.size());
    Eigen::VectorXd c = Eigen::VectorXd::Zero(size);
    c.head(coeffs_.size()) += coeffs_;
    c.head(other.coeffs_.size()) += other.coeffs_;
    return Polynomial(c);
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other * -1.0; }

Polynomial Polynomial::operator*(double s) const { return Polynomial(Eigen::VectorXd(coeffs_ * s)); }

Polynomial Polynomial::monomial(int power, double coefficient) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(power + 1);
    c(power) = coefficient;
    return Polynomial(c);
}

std::vector<double> Polynomial::real_roots() const {
    const Polynomial p = trimmed(1e-15);
    const int d = p.degree();
    std::vector<double> roots;
    if (d == 0) {
        return roots;
    }
    if (d == 1) {
        roots.push_back(-p.coefficient(0) / p.coefficient(1));
        return roots;
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    companion.diagonal(-1).setOnes();
    for (int k = 0; k < d; ++k) {
        companion(k, d - 1) = -p.coefficient(k) / p.leading();
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const Polynomial dp = p.derivative();
    for (const auto& lambda : solver.eigenvalues()) {
        // Near-real pairs are kept: evaluating at a spurious candidate never hurts an extremum
        // search, while dropping a clustered real root would.
        if (std::abs(lambda.imag()) > 1e-6 * (1.0 + std::abs(lambda.real()))) {
            continue;
        }
        double s = lambda.real();
        for (int it = 0; it < 8; ++it) {
            const double slope = dp(s);
            if (slope == 0.0) {
                break;
            }
            const double next = s - p(s) / slope;
            if (!std::isfinite(next) || std::abs(next - s) > 1e-3 * (1.0 + std::abs(s))) {
                break;
            }
            s = next;
        }
        roots.push_back(s);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::optional<Extremum> sup_over_reals(const Polynomial& poly) {
    const Polynomial p = poly.trimmed(1e-14);
    if (p.degree() == 0) {
        return Extremum{0.0, p(0.0)};
    }
    if (p.degree() % 2 != 0 || p.leading() > 0.0) {
        return std::nullopt;
    }
    Extremum best{0.0, p(0.0)};
    for (double s : p.derivative().real_roots()) {
        const double v = p(s);
        if (v > best.value) {
            best = {s, v};
        }
    }
    return best;
}

}  // namespace nlchns
