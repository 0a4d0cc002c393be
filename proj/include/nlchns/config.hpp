#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlchns/kernel.hpp"
#include "nlchns/potential.hpp"

namespace nlchns {

enum class ForcingFamily { zero, body, single_mode };

/// Volume force h(x, t).
///   body:        h = amplitude e^{-decay t} (constant vector)
///   single_mode: h = amplitude[0] e^{-decay t} (k_perp / |k|) sin(k . x), k = 2 pi mode / l,
///                which is divergence free
struct ForcingSpec {
    ForcingFamily family = ForcingFamily::zero;
    std::array<double, 2> amplitude{0.0, 0.0};
    std::array<int, 2> mode{1, 0};
    double decay = 0.0;

    /// True when h is in L^2(0, inf; V_div'), which the dissipative estimate needs.
    bool square_integrable() const;
};

enum class ForceForm { phi_grad_mu, mu_grad_phi };

struct SimParams {
    double nu = 0.01;
    double dt = 1e-3;
    double stabilizer = 0.0;
    double t_end = 1.0;
    bool dealias = true;
    ForceForm force_form = ForceForm::phi_grad_mu;
};

enum class InitialFamily { uniform, random, tanh_strip, file };
enum class VelocityFamily { zero, taylor_green, file };

struct InitialSpec {
    InitialFamily family = InitialFamily::uniform;
    double value = 0.0;      ///< uniform
    double amplitude = 0.0;  ///< random
    double mean = 0.0;       ///< random, tanh_strip offset
    std::uint64_t seed = 0;
    int max_mode = -1;       ///< random low-pass cutoff; -1 means n/4
    double width = 0.1;      ///< tanh_strip
    std::string path;

    VelocityFamily velocity = VelocityFamily::zero;
    double velocity_amplitude = 1.0;
    std::string velocity_path_x;
    std::string velocity_path_y;
};

struct OutputSpec {
    int record_every = 1;
    int snapshot_every = 0;
    std::string dir;
};

struct CheckSpec {
    bool enforce_hypotheses = true;
    bool grad_control = false;
    bool dissipative = false;
};

struct SimConfig {
    int n = 64;
    double l = 6.283185307179586;
    KernelSpec kernel;
    PotentialSpec potential;
    Range range;  ///< working range for hypothesis checks and the stabilizer bound
    SimParams params;
    bool stabilizer_auto = true;
    ForcingSpec forcing;
    InitialSpec initial;
    OutputSpec output;
    CheckSpec checks;

    Grid grid() const { return Grid(n, l); }
    long steps() const;
};

/// Parses the flat `section.key = value` format. Throws ConfigError listing every problem.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::string& path);
/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const SimConfig& config);

std::string to_string(ForcingFamily family);
std::string to_string(InitialFamily family);
std::string to_string(VelocityFamily family);
std::string to_string(ForceForm form);

}  // namespace nlchns
