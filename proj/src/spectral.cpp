#include "nlchns/spectral.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

#include "fft.hpp"

namespace nlchns {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (a != b) {
        throw StructuralError(std::string(what) + ": fields live on different grids");
    }
}

// ---------------------------------------------------------------------------------------------
// Grid

Grid::Grid(int n, double l) : n_(n), l_(l) {
    if (n < 8 || (n & (n - 1)) != 0) {
        throw StructuralError("grid size must be a power of two >= 8, got " + std::to_string(n));
    }
    if (!(l > 0.0) || !std::isfinite(l)) {
        throw StructuralError("grid side length must be positive and finite");
    }
}

double Grid::wavenumber(int i) const { return two_pi * mode(i) / l_; }

double Grid::derivative_wavenumber(int i) const {
    return i == n_ / 2 ? 0.0 : wavenumber(i);
}

double Grid::k_squared(int i, int j) const {
    const double kx = derivative_wavenumber(i);
    const double ky = derivative_wavenumber(j);
    return kx * kx + ky * ky;
}

double Grid::spectral_gap() const { return (two_pi / l_) * (two_pi / l_); }

// ---------------------------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(const Grid& grid) : grid_(grid), values_(RealArray::Zero(grid.n(), grid.n())) {}

ScalarField::ScalarField(const Grid& grid, RealArray values) : grid_(grid), values_(std::move(values)) {
    if (values_.rows() != grid.n() || values_.cols() != grid.n()) {
        throw StructuralError("scalar field: sample array does not match grid size");
    }
}

ScalarField ScalarField::constant(const Grid& grid, double value) {
    return ScalarField(grid, RealArray::Constant(grid.n(), grid.n(), value));
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same_grid(grid_, other.grid_, "add");
    values_ += other.values_;
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same_grid(grid_, other.grid_, "subtract");
    values_ -= other.values_;
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    values_ *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "multiply");
    return ScalarField(a.grid(), a.values() * b.values());
}

// ---------------------------------------------------------------------------------------------
// VectorField

VectorField::VectorField(const Grid& grid) : components_{ScalarField(grid), ScalarField(grid)} {}

VectorField::VectorField(ScalarField x, ScalarField y) : components_{std::move(x), std::move(y)} {
    require_same_grid(components_[0].grid(), components_[1].grid(), "vector field");
}

double VectorField::max_abs() const {
    return std::max(components_[0].values().abs().maxCoeff(), components_[1].values().abs().maxCoeff());
}

VectorField& VectorField::operator+=(const VectorField& other) {
    components_[0] += other.components_[0];
    components_[1] += other.components_[1];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
    components_[0] -= other.components_[0];
    components_[1] -= other.components_[1];
    return *this;
}

VectorField& VectorField::operator*=(double s) {
    components_[0] *= s;
    components_[1] *= s;
    return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

// ---------------------------------------------------------------------------------------------
// SpectrumField

SpectrumField::SpectrumField(const Grid& grid)
    : grid_(grid), coeffs_(ComplexArray::Zero(grid.n(), grid.spectral_cols())) {}

SpectrumField::SpectrumField(const Grid& grid, ComplexArray coefficients)
    : grid_(grid), coeffs_(std::move(coefficients)) {
    if (coeffs_.rows() != grid.n() || coeffs_.cols() != grid.spectral_cols()) {
        throw StructuralError("spectrum: coefficient array does not match grid size");
    }
}

double SpectrumField::energy() const {
    double sum = 0.0;
    for (int j = 0; j < coeffs_.cols(); ++j) {
        sum += column_weight(j) * coeffs_.col(j).abs2().sum();
    }
    return sum;
}

// ---------------------------------------------------------------------------------------------
// Transforms

SpectrumField transform(const ScalarField& f) {
    const Grid& grid = f.grid();
    auto& plan = detail::plan_for(grid.n());
    const std::size_t count = static_cast<std::size_t>(grid.n()) * grid.n();
    std::memcpy(plan.real_buffer(), f.values().data(), count * sizeof(double));
    plan.forward();
    SpectrumField out(grid);
    const double scale = 1.0 / static_cast<double>(count);
    const Complex* src = plan.complex_buffer();
    Complex* dst = out.coefficients().data();
    const std::size_t ccount = static_cast<std::size_t>(grid.n()) * grid.spectral_cols();
    for (std::size_t k = 0; k < ccount; ++k) {
        dst[k] = src[k] * scale;
    }
    return out;
}

ScalarField inverse_transform(const SpectrumField& spectrum) {
    const Grid& grid = spectrum.grid();
    auto& plan = detail::plan_for(grid.n());
    const std::size_t ccount = static_cast<std::size_t>(grid.n()) * grid.spectral_cols();
    std::memcpy(static_cast<void*>(plan.complex_buffer()), spectrum.coefficients().data(),
                ccount * sizeof(Complex));
    plan.backward();
    ScalarField out(grid);
    std::memcpy(out.values().data(), plan.real_buffer(),
                static_cast<std::size_t>(grid.n()) * grid.n() * sizeof(double));
    return out;
}

std::array<SpectrumField, 2> transform(const VectorField& v) { return {transform(v.x()), transform(v.y())}; }

VectorField inverse_transform(const std::array<SpectrumField, 2>& v) {
    return VectorField(inverse_transform(v[0]), inverse_transform(v[1]));
}

// ---------------------------------------------------------------------------------------------
// Spectral operators

std::array<SpectrumField, 2> gradient(const SpectrumField& f) {
    const Grid& grid = f.grid();
    SpectrumField gx(grid), gy(grid);
    const Complex I(0.0, 1.0);
    for (int i = 0; i < grid.n(); ++i) {
        const double kx = grid.derivative_wavenumber(i);
        for (int j = 0; j < grid.spectral_cols(); ++j) {
            const double ky = grid.derivative_wavenumber(j);
            gx(i, j) = I * kx * f(i, j);
            gy(i, j) = I * ky * f(i, j);
        }
    }
    return {std::move(gx), std::move(gy)};
}

SpectrumField divergence(const std::array<SpectrumField, 2>& v) {
    const Grid& grid = v[0].grid();
    require_same_grid(grid, v[1].grid(), "divergence");
    SpectrumField out(grid);
    const Complex I(0.0, 1.0);
    for (int i = 0; i < grid.n(); ++i) {
        const double kx = grid.derivative_wavenumber(i);
        for (int j = 0; j < grid.spectral_cols(); ++j) {
            const double ky = grid.derivative_wavenumber(j);
            out(i, j) = I * (kx * v[0](i, j) + ky * v[1](i, j));
        }
    }
    return out;
}

SpectrumField laplacian(const SpectrumField& f) {
    const Grid& grid = f.grid();
    SpectrumField out(grid);
    for (int i = 0; i < grid.n(); ++i) {
        for (int j = 0; j < grid.spectral_cols(); ++j) {
            out(i, j) = -grid.k_squared(i, j) * f(i, j);
        }
    }
    return out;
}

std::array<SpectrumField, 2> leray_project(const std::array<SpectrumField, 2>& v) {
    const Grid& grid = v[0].grid();
    require_same_grid(grid, v[1].grid(), "leray_project");
    std::array<SpectrumField, 2> out = v;
    for (int i = 0; i < grid.n(); ++i) {
        const double kx = grid.derivative_wavenumber(i);
        for (int j = 0; j < grid.spectral_cols(); ++j) {
            const double ky = grid.derivative_wavenumber(j);
            const double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) {
                continue;  // mean flow (and the Nyquist-only modes) pass through
            }
            const Complex dot = (kx * v[0](i, j) + ky * v[1](i, j)) / k2;
            out[0](i, j) -= kx * dot;
            out[1](i, j) -= ky * dot;
        }
    }
    return out;
}

SpectrumField low_pass(const SpectrumField& f, int max_mode) {
    const Grid& grid = f.grid();
    SpectrumField out = f;
    for (int i = 0; i < grid.n(); ++i) {
        const int mx = std::abs(grid.mode(i));
        for (int j = 0; j < grid.spectral_cols(); ++j) {
            if (mx > max_mode || j > max_mode) {
                out(i, j) = 0.0;
            }
        }
    }
    return out;
}

SpectrumField dealias(const SpectrumField& f) {
    // 2/3 rule: keep |m| <= n/3 in each direction.
    return low_pass(f, f.grid().n() / 3);
}

double gradient_energy(const SpectrumField& f) {
    const Grid& grid = f.grid();
    double sum = 0.0;
    for (int i = 0; i < grid.n(); ++i) {
        for (int j = 0; j < grid.spectral_cols(); ++j) {
            sum += f.column_weight(j) * grid.k_squared(i, j) * std::norm(f(i, j));
        }
    }
    return sum;
}

double spectral_dot(const SpectrumField& a, const SpectrumField& b) {
    require_same_grid(a.grid(), b.grid(), "spectral_dot");
    double sum = 0.0;
    for (int j = 0; j < a.coefficients().cols(); ++j) {
        sum += a.column_weight(j) * (a.coefficients().col(j).conjugate() * b.coefficients().col(j)).real().sum();
    }
    return sum;
}

// ---------------------------------------------------------------------------------------------
// Physical-space conveniences

VectorField gradient(const ScalarField& f) { return inverse_transform(gradient(transform(f))); }

ScalarField divergence(const VectorField& v) { return inverse_transform(divergence(transform(v))); }

ScalarField laplacian(const ScalarField& f) { return inverse_transform(laplacian(transform(f))); }

VectorField leray_project(const VectorField& v) { return inverse_transform(leray_project(transform(v))); }

double inner(const ScalarField& f, const ScalarField& g) {
    require_same_grid(f.grid(), g.grid(), "inner");
    return f.grid().cell_volume() * (f.values() * g.values()).sum();
}

double inner(const VectorField& v, const VectorField& w) { return inner(v.x(), w.x()) + inner(v.y(), w.y()); }

double norm_l2(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double norm_l2(const VectorField& v) { return std::sqrt(inner(v, v)); }

double seminorm_h1(const ScalarField& f) {
    return std::sqrt(f.grid().measure() * gradient_energy(transform(f)));
}

double seminorm_h1(const VectorField& v) {
    const double sum = gradient_energy(transform(v.x())) + gradient_energy(transform(v.y()));
    return std::sqrt(v.grid().measure() * sum);
}

double mean(const ScalarField& f) { return f.values().mean(); }

double integral(const ScalarField& f) { return f.grid().cell_volume() * f.values().sum(); }

double trilinear(const VectorField& u, const VectorField& v, const VectorField& w) {
    require_same_grid(u.grid(), v.grid(), "trilinear");
    require_same_grid(u.grid(), w.grid(), "trilinear");
    double sum = 0.0;
    for (int c = 0; c < 2; ++c) {
        const VectorField grad = gradient(v[c]);
        const RealArray advect = u.x().values() * grad.x().values() + u.y().values() * grad.y().values();
        sum += (advect * w[c].values()).sum();
    }
    return u.grid().cell_volume() * sum;
}

ScalarField resample(const ScalarField& f, const Grid& target) {
    const Grid& source = f.grid();
    if (source.l() != target.l()) {
        throw StructuralError("resample: grids must share the side length");
    }
    if (source == target) {
        return f;
    }
    const SpectrumField in = transform(f);
    SpectrumField out(target);
    const int limit = std::min(source.n(), target.n()) / 2;  // strictly below both Nyquist modes
    for (int it = 0; it < target.n(); ++it) {
        const int m = target.mode(it);
        if (std::abs(m) >= limit) {
            continue;
        }
        const int is = m >= 0 ? m : m + source.n();
        for (int j = 0; j < limit; ++j) {
            out(it, j) = in(is, j);
        }
    }
    return inverse_transform(out);
}

VectorField resample(const VectorField& v, const Grid& target) {
    return VectorField(resample(v.x(), target), resample(v.y(), target));
}

}  // namespace nlchns
