#include "nlchns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nlchns {

EnergyParts total_energy(const SimState& state, const KernelOnGrid& kernel, const PotentialSpec& potential) {
    EnergyParts e;
    const double dv = state.phi.grid().cell_volume();
    e.kinetic = 0.5 * (state.u.x().values().square().sum() + state.u.y().values().square().sum()) * dv;
    e.interaction = interaction_energy(kernel, state.phi);
    e.bulk = integral(eval_F(potential, state.phi));
    e.total = e.kinetic + e.interaction + e.bulk;
    return e;
}

DiagnosticsEvaluator::DiagnosticsEvaluator(const KernelOnGrid& kernel, const PotentialSpec& potential,
                                           const SimParams& params, const ForcingSpec& forcing,
                                           const HypothesisReport& report)
    : kernel_(kernel),
      potential_(potential),
      params_(params),
      forcing_(forcing),
      beta_(report.beta),
      c0_(report.c0),
      norm_gradJ_l1_(report.norm_gradJ_l1),
      q_(report.h6 ? report.q : 0.0) {}

DiagnosticsRecord DiagnosticsEvaluator::measure(const SimState& state) const {
    return evaluate(state, chemical_potential(state.phi, kernel_, potential_, params_.dealias), state.t);
}

DiagnosticsRecord DiagnosticsEvaluator::measure(const SimState& state, const DiagnosticsRecord& prev,
                                                const ScalarField& step_mu, double step_t) const {
    DiagnosticsRecord r = evaluate(state, step_mu, step_t);
    r.identity_residual = identity_residual(prev, r, params_.nu);
    return r;
}

DiagnosticsRecord DiagnosticsEvaluator::evaluate(const SimState& state, const ScalarField& dissipation_mu,
                                                 double forcing_t) const {
    const ScalarField& phi = state.phi;
    const Grid& grid = phi.grid();
    const SpectrumField phi_hat = transform(phi);
    const ScalarField mu = chemical_potential(phi, kernel_, potential_, params_.dealias);

    DiagnosticsRecord r;
    r.t = state.t;
    r.mass = integral(phi);
    const EnergyParts e = total_energy(state, kernel_, potential_);
    r.kinetic = e.kinetic;
    r.interaction = e.interaction;
    r.bulk = e.bulk;
    r.total_energy = e.total;
    const auto u_hat = transform(state.u);
    r.grad_u_sq = grid.measure() * (gradient_energy(u_hat[0]) + gradient_energy(u_hat[1]));
    r.grad_mu_state_sq = grid.measure() * gradient_energy(transform(mu));
    r.grad_mu_sq = grid.measure() * gradient_energy(transform(dissipation_mu));
    if (forcing_.family != ForcingFamily::zero) {
        r.forcing_power = inner(evaluate_forcing(forcing_, grid, forcing_t), state.u);
    }
    r.grad_phi_sq = grid.measure() * gradient_energy(phi_hat);
    r.phi_l2_sq = grid.measure() * phi_hat.energy();
    r.grad_control_margin = r.grad_mu_state_sq - beta_ * r.grad_phi_sq;
    r.secondary_margin = r.grad_mu_state_sq - 0.25 * c0_ * c0_ * r.grad_phi_sq +
                         2.0 * norm_gradJ_l1_ * norm_gradJ_l1_ * r.phi_l2_sq;
    r.phi_min = phi.values().minCoeff();
    r.phi_max = phi.values().maxCoeff();
    if (q_ > 0.0) {
        r.power_integral = phi.values().abs().pow(2.0 + 2.0 * q_).sum() * grid.cell_volume();
    }
    return r;
}

double identity_residual(const DiagnosticsRecord& prev, const DiagnosticsRecord& cur, double nu) {
    const double dt = cur.t - prev.t;
    return (cur.total_energy - prev.total_energy) / dt + nu * cur.grad_u_sq + cur.grad_mu_sq - cur.forcing_power;
}

InequalityVerdict energy_inequality_check(const std::vector<DiagnosticsRecord>& series, double nu) {
    InequalityVerdict v;
    if (series.empty()) {
        return v;
    }
    const double E0 = series.front().total_energy;
    v.slack = 1e-8 * (1.0 + std::abs(E0));
    v.worst_margin = 0.0;
    v.worst_t = series.front().t;
    double dissipated = 0.0;
    double supplied = 0.0;
    for (std::size_t k = 1; k < series.size(); ++k) {
        const DiagnosticsRecord& r = series[k];
        const double dt = r.t - series[k - 1].t;
        dissipated += dt * (nu * r.grad_u_sq + r.grad_mu_sq);
        supplied += dt * r.forcing_power;
        const double margin = E0 + supplied - r.total_energy - dissipated;
        if (margin < v.worst_margin) {
            v.worst_margin = margin;
            v.worst_t = r.t;
        }
    }
    v.pass = v.worst_margin >= -v.slack;
    return v;
}

InequalityVerdict energy_monotonicity_check(const std::vector<DiagnosticsRecord>& series) {
    InequalityVerdict v;
    if (series.empty()) {
        return v;
    }
    v.slack = 1e-10 * (1.0 + std::abs(series.front().total_energy));
    for (std::size_t k = 1; k < series.size(); ++k) {
        const double margin = series[k - 1].total_energy - series[k].total_energy;
        if (margin < v.worst_margin) {
            v.worst_margin = margin;
            v.worst_t = series[k].t;
        }
    }
    v.pass = v.worst_margin >= -v.slack;
    return v;
}

EnvelopeConstants envelope_constants(const KernelOnGrid& kernel, const PotentialSpec& potential, double nu,
                                     const ForcingSpec& forcing, double mean_phi0, bool velocity_mean_zero) {
    const Grid& grid = kernel.grid();
    EnvelopeConstants c;
    c.m = mean_phi0;
    c.offset = eval_F(potential, mean_phi0) * grid.measure();
    c.lambda1 = grid.spectral_gap();
    c.c11 = std::max(1.0, 1.0 / (2.0 * c.lambda1 * nu));
    c.k = 1.0 / (2.0 * c.c11);

    if (!velocity_mean_zero) {
        c.reason = "u0 has a nonzero mean, so ||u|| is not controlled by ||grad u||";
        return c;
    }
    if (!forcing.square_integrable()) {
        c.reason = "forcing is not square integrable in time with values in V_div'";
        return c;
    }
    c.forcing_l2 = forcing_time_integral(forcing, grid);
    if (!std::isfinite(c.forcing_l2)) {
        c.reason = "forcing has a nonzero mean";
        return c;
    }

    const PotentialSpec shifted = potential.shifted(mean_phi0);
    const double a_star = kernel_norms(kernel).a_star;
    const H6Fit h6 = verify_h6(shifted, a_star);
    if (!h6.pass) {
        c.reason = "the growth floor F(s) >= c7 |s|^{2+2q} - c8 is not available for this potential";
        return c;
    }
    c.c7 = h6.c7;
    c.c8 = h6.c8;
    c.q = h6.q;

    // (mu, phi) <= ||grad mu||^2 + (C_P^2/4) ||phi||^2 and F'(s)s >= F(s) - (a*/2)s^2 - F(0) give
    //   (1/2) int int J (phi(x)-phi(y))^2 + (1/2) int F <= ||grad mu||^2 + gamma ||phi||^2
    //                                                       - (c7/2) int |phi|^{2+2q} + (c8/2 + F(0))|Omega|,
    // and gamma s^2 - (c7/2)|s|^{2+2q} is bounded above by gamma r q/(q+1), r = (2 gamma/(c7 (q+1)))^{1/q}.
    const double C_P = poincare_constant(grid);
    c.gamma = 0.5 * a_star + 0.25 * C_P * C_P;
    const double r = std::pow(2.0 * c.gamma / (c.c7 * (c.q + 1.0)), 1.0 / c.q);
    const double sup_gap = c.gamma * r * c.q / (c.q + 1.0);
    c.c10 = grid.measure() * (sup_gap + 0.5 * c.c8 + eval_F(shifted, 0.0));
    c.K = 2.0 * c.c10 + c.forcing_l2 / (2.0 * nu);
    c.applicable = true;
    return c;
}

double envelope_bound(const EnvelopeConstants& c, double E0, double t) {
    const double decay = std::exp(-c.k * t);
    // For F(m) < 0 the shifted energy E - F(m)|Omega| is what decays.
    const double start = c.offset >= 0.0 ? E0 : E0 - c.offset;
    return start * decay + c.offset + c.K;
}

EnvelopeCheck dissipative_envelope(const std::vector<DiagnosticsRecord>& series, const EnvelopeConstants& constants) {
    EnvelopeCheck check;
    check.constants = constants;
    check.applicable = constants.applicable;
    if (!constants.applicable || series.empty()) {
        return check;
    }
    const double E0 = series.front().total_energy;
    const double slack = 1e-8 * (1.0 + std::abs(E0));
    check.worst_margin = std::numeric_limits<double>::infinity();
    const double t0 = series.front().t;
    for (const DiagnosticsRecord& r : series) {
        const double margin = envelope_bound(constants, E0, r.t - t0) - r.total_energy;
        check.verdicts.push_back(margin >= -slack);
        if (margin < check.worst_margin) {
            check.worst_margin = margin;
            check.worst_t = r.t;
        }
    }
    check.pass = check.worst_margin >= -slack;
    return check;
}

GradientControl gradient_control_check(const DiagnosticsRecord& record, double beta, bool condition_ok,
                                       bool mean_zero) {
    GradientControl g;
    g.applicable = condition_ok && mean_zero;
    g.margin = record.grad_mu_state_sq - beta * record.grad_phi_sq;
    g.scale = 1.0 + record.grad_mu_state_sq + beta * record.grad_phi_sq;
    g.pass = !g.applicable || g.margin >= -1e-8 * g.scale;
    return g;
}

FloorCheck coercivity_floor(const DiagnosticsRecord& record, const HypothesisReport& report, double measure) {
    FloorCheck f;
    if (!report.h3) {
        return f;
    }
    const double lhs = 2.0 * record.interaction + 2.0 * record.bulk;
    const double rhs = report.alpha * record.phi_l2_sq - 2.0 * report.c2 * measure;
    f.margin = lhs - rhs;
    f.pass = f.margin >= -1e-10 * (1.0 + std::abs(lhs) + std::abs(rhs));
    return f;
}

FloorCheck growth_floor(const DiagnosticsRecord& record, const HypothesisReport& report, double measure) {
    FloorCheck f;
    if (!report.h6 || report.q <= 0.0) {
        return f;
    }
    const double rhs = report.c7 * record.power_integral - report.c8 * measure;
    f.margin = record.bulk - rhs;
    f.pass = f.margin >= -1e-10 * (1.0 + std::abs(record.bulk) + std::abs(rhs));
    return f;
}

}  // namespace nlchns
