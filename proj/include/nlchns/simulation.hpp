#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlchns/config.hpp"
#include "nlchns/diagnostics.hpp"
#include "nlchns/hypotheses.hpp"
#include "nlchns/solver.hpp"

namespace nlchns {

/// `run` refused a configuration that fails (H1)-(H3).
class HypothesisGateError : public std::runtime_error {
public:
    HypothesisGateError(const std::string& what, HypothesisReport report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const HypothesisReport& report() const { return report_; }

private:
    HypothesisReport report_;
};

struct RunOptions {
    bool force = false;                  ///< skip the hypothesis gate
    std::optional<std::uint64_t> seed;   ///< overrides initial.seed
    bool write_output = true;            ///< honour output.dir
};

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    std::vector<std::string> violations;
    std::vector<std::string> notes;
    HypothesisReport report;
    double stabilizer = 0.0;
    Range validated_range;
    bool energy_stable = false;
    long steps_taken = 0;
    bool blew_up = false;

    double max_mass_drift = 0.0;
    double max_divergence = 0.0;

    bool monotonicity_checked = false;
    InequalityVerdict monotonicity;
    InequalityVerdict energy_inequality;
    bool energy_inequality_asserted = false;

    bool grad_control_applicable = false;
    double worst_grad_control = 0.0;  ///< min over records of margin / scale

    EnvelopeCheck envelope;

    bool ok() const { return violations.empty(); }
};

/// Initial (phi, u) at t = 0 as configured.
SimState initial_state(const SimConfig& config, std::optional<std::uint64_t> seed = std::nullopt);

/// One trajectory: owns kernel, potential and audit, advances step by step and checks the state
/// invariants as it goes.
class Simulation {
public:
    Simulation(const SimConfig& config, SimState initial, const RunOptions& options = {});
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    const SimState& state() const { return state_; }
    const SimConfig& config() const { return config_; }
    const KernelOnGrid& kernel() const { return kernel_; }
    const HypothesisReport& report() const { return report_; }
    const SimParams& params() const { return params_; }
    long step_index() const { return step_; }
    bool done() const { return step_ >= total_steps_ || stopped_; }
    /// Record of the current state if it was recorded at the last step.
    const DiagnosticsRecord& last_record() const { return last_record_; }
    bool recorded_last_step() const { return recorded_; }

    /// Advances one step; returns false once the run is over (end time, blow-up or range exit).
    bool advance();
    void run_to_end();
    /// Final audits (energy inequality, envelope); call once after the last step.
    RunResult finish();

private:
    void record();
    void violation(const std::string& what);

    SimConfig config_;
    RunOptions options_;
    KernelOnGrid kernel_;
    HypothesisReport report_;
    SimParams params_;
    SimState state_;
    ScalarField step_mu_;  ///< chemical potential applied by the last step
    double step_t_ = 0.0;  ///< time level the last step started from
    DiagnosticsEvaluator evaluator_;
    RunResult result_;
    DiagnosticsRecord last_record_;
    bool recorded_ = false;
    long step_ = 0;
    long total_steps_ = 0;
    bool stopped_ = false;
    double mean0_ = 0.0;
    double energy_prev_ = 0.0;
    bool assert_monotone_ = false;
    bool mean_zero_ = false;
    bool velocity_mean_zero_ = true;
    std::string csv_path_;
    std::vector<std::string> reported_kinds_;
};

/// Builds, runs and audits the configured trajectory.
RunResult run(const SimConfig& config, const RunOptions& options = {});

}  // namespace nlchns
