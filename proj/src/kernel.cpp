#include "nlchns/kernel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nlchns {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::ostringstream os;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        os << (i ? "; " : "") << problems[i];
    }
    return os.str();
}

// Periodic image offsets needed for a kernel whose support (or 1e-16 tail) is within two cells.
constexpr int image_reach = 2;

struct RadialProfile {
    double value;
    double slope;  // dJ/dr
};

template <typename Profile>
void sample_periodized(const Grid& grid, Profile&& profile, ScalarField& values, ScalarField& grad_magnitude) {
    const double h = grid.spacing();
    const double l = grid.l();
    for (int i = 0; i < grid.n(); ++i) {
        for (int j = 0; j < grid.n(); ++j) {
            // The periodized profile is even in each coordinate; sampling at |x|, |y| makes the table
            // exactly even, independent of the summation order over images.
            const double x0 = std::min(i, grid.n() - i) * h;
            const double y0 = std::min(j, grid.n() - j) * h;
            double value = 0.0, gx = 0.0, gy = 0.0;
            for (int p = -image_reach; p <= image_reach; ++p) {
                for (int q = -image_reach; q <= image_reach; ++q) {
                    const double x = x0 + p * l;
                    const double y = y0 + q * l;
                    const double r = std::hypot(x, y);
                    const RadialProfile prof = profile(r);
                    value += prof.value;
                    if (r > 0.0) {
                        gx += prof.slope * x / r;
                        gy += prof.slope * y / r;
                    }
                }
            }
            values(i, j) = value;
            grad_magnitude(i, j) = std::hypot(gx, gy);
        }
    }
}

KernelOnGrid finish(ScalarField samples, double grad_norm_l1) {
    const Grid grid = samples.grid();
    SpectrumField symbol = transform(samples);
    symbol.coefficients() *= grid.measure();
    KernelOnGrid k{std::move(samples), std::move(symbol), 0.0, 0.0, grad_norm_l1};
    k.a = k.symbol(0, 0).real();
    k.norm_l1 = grid.cell_volume() * k.samples.values().abs().sum();
    return k;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

KernelSpec KernelSpec::gaussian(double sigma, double strength) {
    KernelSpec s;
    s.family = KernelFamily::gaussian;
    s.sigma = sigma;
    s.strength = strength;
    return s;
}

KernelSpec KernelSpec::mollifier(double radius, double strength) {
    KernelSpec s;
    s.family = KernelFamily::mollifier;
    s.radius = radius;
    s.strength = strength;
    return s;
}

KernelSpec KernelSpec::spectral(std::map<int, double> symbol_by_m2) {
    KernelSpec s;
    s.family = KernelFamily::spectral;
    s.symbol = std::move(symbol_by_m2);
    return s;
}

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::mollifier: return "mollifier";
        case KernelFamily::spectral: return "spectral";
    }
    return "unknown";
}

double gaussian_gradient_norm_l1(double sigma, double strength) {
    // int |grad J| = strength / sigma^4 int_0^inf r^2 e^{-r^2/2sigma^2} dr
    return strength * std::sqrt(std::numbers::pi / 2.0) / sigma;
}

double mollifier_mass(double radius, double strength) {
    // 2 pi r^2 int_0^1 e^{-1/(1-t^2)} t dt = pi r^2 (e^{-1} - E1(1)), with E1(1) = -Ei(-1).
    const double bump = std::exp(-1.0) + std::expint(-1.0);
    return strength * std::numbers::pi * radius * radius * bump;
}

KernelOnGrid build_kernel(const KernelSpec& spec, const Grid& grid) {
    std::vector<std::string> problems;
    switch (spec.family) {
        case KernelFamily::gaussian: {
            if (!(spec.sigma > 0.0)) problems.push_back("kernel.sigma must be positive");
            if (!(spec.strength > 0.0)) problems.push_back("kernel.strength must be positive");
            if (spec.sigma > grid.l() / 6.0) {
                problems.push_back("kernel support exceeds half the domain (gaussian sigma > l/6)");
            }
            break;
        }
        case KernelFamily::mollifier: {
            if (!(spec.radius > 0.0)) problems.push_back("kernel.radius must be positive");
            if (!(spec.strength > 0.0)) problems.push_back("kernel.strength must be positive");
            if (spec.radius >= grid.l() / 2.0) {
                problems.push_back("kernel support exceeds half the domain (mollifier radius >= l/2)");
            }
            break;
        }
        case KernelFamily::spectral: {
            for (const auto& [m2, value] : spec.symbol) {
                if (m2 < 0) problems.push_back("kernel.symbol: negative |m|^2 key");
                if (!std::isfinite(value)) problems.push_back("kernel.symbol: non-finite value");
            }
            break;
        }
    }
    if (!problems.empty()) {
        throw ConfigError(problems);
    }

    if (spec.family == KernelFamily::spectral) {
        SpectrumField symbol(grid);
        for (int i = 0; i < grid.n(); ++i) {
            const int mx = grid.mode(i);
            for (int j = 0; j < grid.spectral_cols(); ++j) {
                const int my = j == grid.n() / 2 ? -j : j;
                const auto it = spec.symbol.find(mx * mx + my * my);
                if (it != spec.symbol.end()) {
                    symbol(i, j) = it->second;
                }
            }
        }
        SpectrumField scaled = symbol;
        scaled.coefficients() /= grid.measure();
        ScalarField samples = inverse_transform(scaled);
        const double peak = samples.values().abs().maxCoeff();
        if (samples.values().minCoeff() < -1e-12 * std::max(peak, 1e-300)) {
            throw ConfigError("kernel.symbol does not define a pointwise nonnegative kernel");
        }
        const VectorField g = inverse_transform(gradient(transform(samples)));
        const double grad_l1 =
            grid.cell_volume() * (g.x().values().square() + g.y().values().square()).sqrt().sum();
        KernelOnGrid k{std::move(samples), std::move(symbol), 0.0, 0.0, grad_l1};
        k.a = k.symbol(0, 0).real();
        k.norm_l1 = grid.cell_volume() * k.samples.values().abs().sum();
        return k;
    }

    ScalarField values(grid), grad(grid);
    if (spec.family == KernelFamily::gaussian) {
        const double s2 = spec.sigma * spec.sigma;
        const double c = spec.strength / (2.0 * std::numbers::pi * s2);
        sample_periodized(grid, [&](double r) {
            const double v = c * std::exp(-r * r / (2.0 * s2));
            return RadialProfile{v, -v * r / s2};
        }, values, grad);
    } else {
        const double R = spec.radius;
        sample_periodized(grid, [&](double r) {
            const double rho = r / R;
            if (rho >= 1.0) {
                return RadialProfile{0.0, 0.0};
            }
            const double w = 1.0 - rho * rho;
            const double v = spec.strength * std::exp(-1.0 / w);
            return RadialProfile{v, -v * 2.0 * rho / (w * w) / R};
        }, values, grad);
    }
    const double grad_l1 = grid.cell_volume() * grad.values().sum();
    return finish(std::move(values), grad_l1);
}

KernelOnGrid kernel_from_samples(const ScalarField& samples) {
    const Grid& grid = samples.grid();
    const VectorField g = inverse_transform(gradient(transform(samples)));
    const double grad_l1 = grid.cell_volume() * (g.x().values().square() + g.y().values().square()).sqrt().sum();
    return finish(samples, grad_l1);
}

SpectrumField convolve(const KernelOnGrid& kernel, const SpectrumField& f) {
    require_same_grid(kernel.grid(), f.grid(), "convolve");
    SpectrumField out = f;
    out.coefficients() *= kernel.symbol.coefficients();
    return out;
}

ScalarField convolve(const KernelOnGrid& kernel, const ScalarField& f) {
    return inverse_transform(convolve(kernel, transform(f)));
}

double interaction_energy(const KernelOnGrid& kernel, const SpectrumField& f_hat) {
    require_same_grid(kernel.grid(), f_hat.grid(), "interaction_energy");
    const Grid& grid = f_hat.grid();
    double sum = 0.0;
    for (int i = 0; i < grid.n(); ++i) {
        for (int j = 0; j < grid.spectral_cols(); ++j) {
            sum += f_hat.column_weight(j) * (kernel.a - kernel.symbol(i, j).real()) * std::norm(f_hat(i, j));
        }
    }
    return 0.5 * grid.measure() * sum;
}

double interaction_energy(const KernelOnGrid& kernel, const ScalarField& f) {
    return interaction_energy(kernel, transform(f));
}

KernelNorms kernel_norms(const KernelOnGrid& kernel) {
    return {kernel.a, kernel.norm_l1, kernel.grad_norm_l1, kernel.a};
}

}  // namespace nlchns
