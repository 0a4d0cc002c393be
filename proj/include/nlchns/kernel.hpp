#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlchns/spectral.hpp"

namespace nlchns {

/// Invalid run parameters. Carries every violation found, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    explicit ConfigError(const std::string& problem) : ConfigError(std::vector<std::string>{problem}) {}
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

enum class KernelFamily { gaussian, mollifier, spectral };

/// Even, pointwise nonnegative interaction kernel J.
///
/// gaussian:  J(x) = strength / (2 pi sigma^2) exp(-|x|^2 / (2 sigma^2)), unit mass times strength.
/// mollifier: J(x) = strength exp(-1 / (1 - |x|^2 / r^2)) for |x| < r, zero outside.
/// spectral:  J given by its symbol, radially tabulated by integer |m|^2 (missing shells are 0).
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double sigma = 0.0;
    double radius = 0.0;
    double strength = 1.0;
    std::map<int, double> symbol;

    static KernelSpec gaussian(double sigma, double strength);
    static KernelSpec mollifier(double radius, double strength);
    static KernelSpec spectral(std::map<int, double> symbol_by_m2);
};

std::string to_string(KernelFamily family);

/// J sampled on the torus (periodized by image sums) together with its symbol
/// J^(k) = int_Omega J(x) e^{-ik.x} dx, so that (J * f)^ = J^(k) f^(k).
struct KernelOnGrid {
    ScalarField samples;
    SpectrumField symbol;
    double a = 0.0;             ///< int_Omega J, constant on the torus
    double norm_l1 = 0.0;       ///< ||J||_{L^1}
    double grad_norm_l1 = 0.0;  ///< ||grad J||_{L^1}

    const Grid& grid() const { return samples.grid(); }
};

struct KernelNorms {
    double a;
    double norm_l1;
    double grad_norm_l1;
    double a_star;  ///< ||a||_inf; equal to a on the torus
};

KernelOnGrid build_kernel(const KernelSpec& spec, const Grid& grid);

/// Builds a kernel from raw samples. Used for audits of tables that are not produced by one of
/// the shipped families; symmetry is not enforced (check_h1 reports it).
KernelOnGrid kernel_from_samples(const ScalarField& samples);

ScalarField convolve(const KernelOnGrid& kernel, const ScalarField& f);
SpectrumField convolve(const KernelOnGrid& kernel, const SpectrumField& f);

/// (1/4) int int J(x-y) (f(x)-f(y))^2 dx dy, evaluated as (1/2) [a ||f||^2 - (f, J*f)].
double interaction_energy(const KernelOnGrid& kernel, const ScalarField& f);
double interaction_energy(const KernelOnGrid& kernel, const SpectrumField& f_hat);

KernelNorms kernel_norms(const KernelOnGrid& kernel);

/// Closed forms used by tests and reports.
double gaussian_gradient_norm_l1(double sigma, double strength);
double mollifier_mass(double radius, double strength);

}  // namespace nlchns
