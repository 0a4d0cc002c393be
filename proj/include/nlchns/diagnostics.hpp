#pragma once

#include <string>
#include <vector>

#include "nlchns/hypotheses.hpp"
#include "nlchns/solver.hpp"

namespace nlchns {

/// One row of the diagnostics CSV plus a few quantities used by the checks but not written.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;  ///< (phi, 1)
    double kinetic = 0.0;
    double interaction = 0.0;
    double bulk = 0.0;
    double total_energy = 0.0;
    double grad_u_sq = 0.0;
    /// ||grad mu||^2. For a state produced by a step, mu is the chemical potential that step applied.
    double grad_mu_sq = 0.0;
    /// <h, u(t)> with h taken at the time level the step used (h(0) for the initial state).
    double forcing_power = 0.0;
    double identity_residual = 0.0;
    double grad_control_margin = 0.0;  ///< ||grad mu(phi)||^2 - beta ||grad phi||^2
    double phi_min = 0.0;
    double phi_max = 0.0;

    double grad_phi_sq = 0.0;
    double phi_l2_sq = 0.0;
    /// ||grad mu(phi)||^2 with mu = a phi - J * phi + F'(phi) of the state itself.
    double grad_mu_state_sq = 0.0;
    /// ||grad mu(phi)||^2 - (c0^2/4) ||grad phi||^2 + 2 ||grad J||^2 ||phi||^2
    double secondary_margin = 0.0;
    /// int |phi|^{2+2q}, zero when no growth exponent is configured.
    double power_integral = 0.0;
};

struct EnergyParts {
    double kinetic = 0.0;
    double interaction = 0.0;
    double bulk = 0.0;
    double total = 0.0;
};

EnergyParts total_energy(const SimState& state, const KernelOnGrid& kernel, const PotentialSpec& potential);

/// Evaluates records along a trajectory; holds the constants the margins need.
class DiagnosticsEvaluator {
public:
    DiagnosticsEvaluator(const KernelOnGrid& kernel, const PotentialSpec& potential, const SimParams& params,
                         const ForcingSpec& forcing, const HypothesisReport& report);

    /// Record of a state on its own (initial data): mu = mu(phi), forcing at t, zero residual.
    DiagnosticsRecord measure(const SimState& state) const;
    /// Record of a state produced by a step taken at time `step_t` with chemical potential `step_mu`;
    /// the residual is taken against `prev`.
    DiagnosticsRecord measure(const SimState& state, const DiagnosticsRecord& prev, const ScalarField& step_mu,
                              double step_t) const;

    double nu() const { return params_.nu; }

private:
    DiagnosticsRecord evaluate(const SimState& state, const ScalarField& dissipation_mu, double forcing_t) const;

    const KernelOnGrid& kernel_;
    const PotentialSpec& potential_;
    SimParams params_;
    ForcingSpec forcing_;
    double beta_;
    double c0_;
    double norm_gradJ_l1_;
    double q_;
};

/// (E_cur - E_prev)/dt + nu grad_u_sq_cur + grad_mu_sq_cur - forcing_power_cur, with dt = t_cur - t_prev.
double identity_residual(const DiagnosticsRecord& prev, const DiagnosticsRecord& cur, double nu);

struct InequalityVerdict {
    bool pass = true;
    double worst_margin = 0.0;
    double worst_t = 0.0;
    double slack = 0.0;
};

/// E(t) + int_0^t (nu ||grad u||^2 + ||grad mu||^2) <= E(0) + int_0^t <h, u> at every record. Each
/// interval is integrated with its end-of-interval values, which is how the stepper telescopes.
InequalityVerdict energy_inequality_check(const std::vector<DiagnosticsRecord>& series, double nu);

/// E non-increasing between consecutive records within 1e-10 (1 + |E_0|).
InequalityVerdict energy_monotonicity_check(const std::vector<DiagnosticsRecord>& series);

struct EnvelopeConstants {
    bool applicable = false;
    std::string reason;  ///< why not applicable
    double lambda1 = 0.0;
    double c11 = 0.0;
    double k = 0.0;
    double gamma = 0.0;
    double c7 = 0.0, c8 = 0.0, q = 0.0;
    double c10 = 0.0;
    double forcing_l2 = 0.0;  ///< ||h||^2 in L^2(0, inf; V_div')
    double K = 0.0;
    double m = 0.0;       ///< mean of phi_0
    double offset = 0.0;  ///< F(m) |Omega|
};

/// Constants of E(t) <= E0 e^{-kt} + F(m)|Omega| + K. For m != 0 the lower-order constants are
/// those of F~(s) = F(s + m) - F(m).
EnvelopeConstants envelope_constants(const KernelOnGrid& kernel, const PotentialSpec& potential, double nu,
                                     const ForcingSpec& forcing, double mean_phi0, bool velocity_mean_zero);

struct EnvelopeCheck {
    EnvelopeConstants constants;
    bool applicable = false;
    bool pass = true;
    std::vector<bool> verdicts;
    double worst_margin = 0.0;
    double worst_t = 0.0;
};

double envelope_bound(const EnvelopeConstants& c, double E0, double t);
EnvelopeCheck dissipative_envelope(const std::vector<DiagnosticsRecord>& series, const EnvelopeConstants& constants);

struct GradientControl {
    bool applicable = false;
    bool pass = true;
    double margin = 0.0;
    double scale = 1.0;
};

/// ||grad mu||^2 >= beta ||grad phi||^2, applicable when the smallness condition holds and phi_0 has
/// zero mean. Tolerance 1e-8 (1 + ||grad mu||^2 + beta ||grad phi||^2).
GradientControl gradient_control_check(const DiagnosticsRecord& record, double beta, bool condition_ok,
                                       bool mean_zero);

struct FloorCheck {
    bool pass = true;
    double margin = 0.0;
};

/// 2 interaction + 2 int F >= alpha ||phi||^2 - 2 c2 |Omega|.
FloorCheck coercivity_floor(const DiagnosticsRecord& record, const HypothesisReport& report, double measure);
/// int F >= c7 int |phi|^{2+2q} - c8 |Omega|.
FloorCheck growth_floor(const DiagnosticsRecord& record, const HypothesisReport& report, double measure);

}  // namespace nlchns
