#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace nlchns {

using Complex = std::complex<double>;
using RealArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexArray = Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Thrown when fields of incompatible shape or grid are combined.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Uniform periodic square grid on [0, l)^2. Sample (i, j) sits at x = i h, y = j h.
class Grid {
public:
    Grid(int n, double l);

    int n() const { return n_; }
    double l() const { return l_; }
    double spacing() const { return l_ / n_; }
    double cell_volume() const { return spacing() * spacing(); }
    double measure() const { return l_ * l_; }
    /// Number of stored spectral columns of the half-complex layout.
    int spectral_cols() const { return n_ / 2 + 1; }

    /// Signed mode number in [-n/2, n/2) for storage index i.
    int mode(int i) const { return i < n_ / 2 ? i : i - n_; }
    /// Wavenumber 2 pi m / l for storage index i.
    double wavenumber(int i) const;
    /// Wavenumber used by odd derivatives; the Nyquist mode is mapped to zero.
    double derivative_wavenumber(int i) const;
    /// |k|^2 consistent with two applications of the first-derivative symbol.
    double k_squared(int i, int j) const;
    /// Smallest nonzero |k|^2, i.e. (2 pi / l)^2.
    double spectral_gap() const;

    bool operator==(const Grid& other) const { return n_ == other.n_ && l_ == other.l_; }
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    int n_;
    double l_;
};

class ScalarField {
public:
    explicit ScalarField(const Grid& grid);
    ScalarField(const Grid& grid, RealArray values);

    static ScalarField constant(const Grid& grid, double value);

    /// Samples f(x, y) at every grid point.
    template <typename Fn>
    static ScalarField sample(const Grid& grid, Fn&& fn) {
        ScalarField out(grid);
        const double h = grid.spacing();
        for (int i = 0; i < grid.n(); ++i) {
            for (int j = 0; j < grid.n(); ++j) {
                out.values_(i, j) = fn(i * h, j * h);
            }
        }
        return out;
    }

    const Grid& grid() const { return grid_; }
    const RealArray& values() const { return values_; }
    RealArray& values() { return values_; }
    double operator()(int i, int j) const { return values_(i, j); }
    double& operator()(int i, int j) { return values_(i, j); }

    bool all_finite() const { return values_.isFinite().all(); }

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s);

private:
    Grid grid_;
    RealArray values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField multiply(const ScalarField& a, const ScalarField& b);

class VectorField {
public:
    explicit VectorField(const Grid& grid);
    VectorField(ScalarField x, ScalarField y);

    const Grid& grid() const { return components_[0].grid(); }
    const ScalarField& operator[](int d) const { return components_[d]; }
    ScalarField& operator[](int d) { return components_[d]; }
    const ScalarField& x() const { return components_[0]; }
    const ScalarField& y() const { return components_[1]; }

    bool all_finite() const { return components_[0].all_finite() && components_[1].all_finite(); }
    double max_abs() const;

    VectorField& operator+=(const VectorField& other);
    VectorField& operator-=(const VectorField& other);
    VectorField& operator*=(double s);

private:
    std::array<ScalarField, 2> components_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// Fourier coefficients c_k = (1/N) sum_x f(x) e^{-i k.x} in half-complex layout
/// (n rows by n/2+1 columns); f(x) = sum_k c_k e^{i k.x}, so a constant field has c_0 equal to
/// the constant and ||f||^2 = |Omega| sum_k |c_k|^2 over the full spectrum.
class SpectrumField {
public:
    explicit SpectrumField(const Grid& grid);
    SpectrumField(const Grid& grid, ComplexArray coefficients);

    const Grid& grid() const { return grid_; }
    const ComplexArray& coefficients() const { return coeffs_; }
    ComplexArray& coefficients() { return coeffs_; }
    Complex operator()(int i, int j) const { return coeffs_(i, j); }
    Complex& operator()(int i, int j) { return coeffs_(i, j); }

    /// Multiplicity of column j in the full spectrum (1 for the self-conjugate columns, else 2).
    double column_weight(int j) const { return (j == 0 || j == grid_.n() / 2) ? 1.0 : 2.0; }
    /// sum over the full spectrum of |c_k|^2.
    double energy() const;

private:
    Grid grid_;
    ComplexArray coeffs_;
};

SpectrumField transform(const ScalarField& f);
ScalarField inverse_transform(const SpectrumField& spectrum);

// Spectral-space differential operators.
std::array<SpectrumField, 2> gradient(const SpectrumField& f);
SpectrumField divergence(const std::array<SpectrumField, 2>& v);
SpectrumField laplacian(const SpectrumField& f);
std::array<SpectrumField, 2> leray_project(const std::array<SpectrumField, 2>& v);
SpectrumField dealias(const SpectrumField& f);
/// Zeroes every mode with max(|m_x|, |m_y|) > max_mode.
SpectrumField low_pass(const SpectrumField& f, int max_mode);
/// sum over k of |k|^2 |c_k|^2 (full spectrum), so ||grad f||^2 = |Omega| * this.
double gradient_energy(const SpectrumField& f);
/// Real part of the full-spectrum sum of conj(a_k) b_k; (f, g) = |Omega| * this.
double spectral_dot(const SpectrumField& a, const SpectrumField& b);

std::array<SpectrumField, 2> transform(const VectorField& v);
VectorField inverse_transform(const std::array<SpectrumField, 2>& v);

// Physical-space conveniences.
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField leray_project(const VectorField& v);

double inner(const ScalarField& f, const ScalarField& g);
double inner(const VectorField& v, const VectorField& w);
double norm_l2(const ScalarField& f);
double norm_l2(const VectorField& v);
double seminorm_h1(const ScalarField& f);
/// ||grad v||, summed over components.
double seminorm_h1(const VectorField& v);
double mean(const ScalarField& f);
double integral(const ScalarField& f);

/// b(u, v, w) = int (u . grad) v . w by grid quadrature.
double trilinear(const VectorField& u, const VectorField& v, const VectorField& w);

/// Resamples a field onto another grid of the same side length by spectral truncation or
/// zero padding. Modes not representable on the target (including its Nyquist row/column) are
/// dropped.
ScalarField resample(const ScalarField& f, const Grid& target);
VectorField resample(const VectorField& v, const Grid& target);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace nlchns
