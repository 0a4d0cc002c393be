#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nlchns/config.hpp"
#include "nlchns/kernel.hpp"

namespace nlchns {

/// Per-level metrics of a study plus the derived orders and verdicts.
struct StudyResult {
    std::string name;
    std::string level_label;  ///< "n" or "dt"
    std::vector<double> levels;
    std::vector<std::string> metric_names;
    std::vector<std::vector<double>> metrics;  ///< metrics[level][metric]
    std::vector<std::pair<std::string, double>> orders;
    std::vector<std::pair<std::string, bool>> verdicts;
    std::vector<std::string> notes;

    bool pass() const;
    double metric(std::size_t level, const std::string& name) const;
    std::string to_csv() const;
    std::string summary() const;
};

/// Literal periodic double sum (J * f)(x_i) = sum_j J(x_i - x_j) f(x_j) h^2. O(n^4); n <= 64.
ScalarField convolution_oracle(const KernelOnGrid& kernel, const ScalarField& field);

/// Kinetic energy against the exact decay e^{-4 nu t} of the Taylor-Green vortex, at dt, dt/2 and
/// dt/4 of the configured step. Needs l = 2 pi, uniform phi and no forcing.
StudyResult taylor_green(const SimConfig& config);

/// Runs the configured problem at every grid size in lockstep from one initial datum generated at the
/// finest size and spectrally truncated. Reports the uniform-bound table and the L^2(0,T;H) distance
/// between consecutive levels.
StudyResult galerkin_refinement(const SimConfig& config, const std::vector<int>& sizes);

/// Runs the configured problem at each dt (geometric sequence, at least three) and reports the order
/// of max |identity residual| and of the successive differences of the final state.
StudyResult dt_order_study(const SimConfig& config, const std::vector<double>& dts);

}  // namespace nlchns
