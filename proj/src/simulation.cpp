#include "nlchns/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nlchns/io.hpp"

namespace nlchns {

namespace {

constexpr double mass_tolerance = 1e-12;
constexpr double divergence_tolerance = 1e-11;

bool forcing_silent(const ForcingSpec& f) {
    return f.family == ForcingFamily::zero || (f.amplitude[0] == 0.0 && f.amplitude[1] == 0.0);
}

std::string snapshot_name(const std::string& field, long step) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%08ld.snap", field.c_str(), step);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << text;
}

}  // namespace

SimState initial_state(const SimConfig& config, std::optional<std::uint64_t> seed) {
    InitialSpec spec = config.initial;
    if (seed) {
        spec.seed = *seed;
    }
    const Grid grid = config.grid();
    return {initial_phi(spec, grid), initial_velocity(spec, grid), 0.0};
}

Simulation::Simulation(const SimConfig& config, SimState initial, const RunOptions& options)
    : config_(config),
      options_(options),
      kernel_(build_kernel(config.kernel, config.grid())),
      report_(audit(kernel_, config_.potential, config.range, config.checks.dissipative)),
      params_(config.params),
      state_(std::move(initial)),
      step_mu_(state_.phi.grid()),
      evaluator_(kernel_, config_.potential, config.params, config.forcing, report_) {
    require_same_grid(state_.phi.grid(), kernel_.grid(), "Simulation");
    require_same_grid(state_.u.grid(), kernel_.grid(), "Simulation");
    if (options.seed) {
        config_.initial.seed = *options.seed;
    }
    result_.report = report_;
    if (config.checks.enforce_hypotheses && !options.force && !report_.existence_pass()) {
        throw HypothesisGateError("configuration fails the existence hypotheses (H1)-(H3); use --force to run anyway",
                                  report_);
    }
    if (!state_.phi.all_finite() || !state_.u.all_finite()) {
        throw ConfigError("initial data contains non-finite values");
    }

    // The stabilizer has to dominate F'' over every value the solution may take: the working range
    // and a margin around the initial data.
    const double lo = state_.phi.values().minCoeff();
    const double hi = state_.phi.values().maxCoeff();
    result_.validated_range = {std::min(config.range.lo, lo - 0.5), std::max(config.range.hi, hi + 0.5)};
    const double bound = stabilizer_bound(config_.potential, result_.validated_range);
    if (config.stabilizer_auto) {
        params_.stabilizer = bound;
    }
    result_.stabilizer = params_.stabilizer;
    result_.energy_stable = params_.stabilizer >= bound;
    assert_monotone_ = result_.energy_stable && forcing_silent(config.forcing);
    result_.monotonicity_checked = assert_monotone_;
    result_.energy_inequality_asserted = assert_monotone_;
    if (!result_.energy_stable) {
        result_.notes.push_back("stabilizer " + std::to_string(params_.stabilizer) + " is below the bound " +
                                std::to_string(bound) + "; energy decay is not guaranteed");
    }

    mean0_ = mean(state_.phi);
    mean_zero_ = std::abs(mean0_) <= 1e-12;
    const double umean = std::max(std::abs(mean(state_.u.x())), std::abs(mean(state_.u.y())));
    velocity_mean_zero_ = umean <= 1e-12 * (1.0 + state_.u.max_abs());
    if (config.checks.grad_control) {
        result_.grad_control_applicable = report_.condition_altass && mean_zero_;
        if (!report_.condition_altass) {
            result_.notes.push_back("gradient control not applicable: C_P >= c0 / (2 ||grad J||_{L^1})");
        } else if (!mean_zero_) {
            result_.notes.push_back("gradient control not applicable: phi_0 does not have zero mean");
        }
    }
    total_steps_ = config.steps();

    if (options.write_output && !config.output.dir.empty()) {
        const std::filesystem::path dir(config.output.dir);
        std::filesystem::create_directories(dir);
        csv_path_ = (dir / "diagnostics.csv").string();
        std::filesystem::remove(csv_path_);
        write_text(dir / "run.cfg", to_text(config_));
        write_text(dir / "hypotheses.txt", to_text(report_));
    }

    energy_prev_ = total_energy(state_, kernel_, config_.potential).total;
    record();
}

void Simulation::violation(const std::string& what) {
    // Only the first occurrence of each kind is kept; the rest would repeat it every step.
    const std::string kind = what.substr(0, what.find(':'));
    if (std::find(reported_kinds_.begin(), reported_kinds_.end(), kind) == reported_kinds_.end()) {
        reported_kinds_.push_back(kind);
        result_.violations.push_back(what);
    }
}

void Simulation::record() {
    DiagnosticsRecord r = result_.records.empty()
                              ? evaluator_.measure(state_)
                              : evaluator_.measure(state_, result_.records.back(), step_mu_, step_t_);
    const double drift = std::abs(r.mass / kernel_.grid().measure() - mean0_);
    result_.max_mass_drift = std::max(result_.max_mass_drift, drift);
    if (drift > mass_tolerance) {
        violation("mass drift: |mean(phi) - mean(phi_0)| = " + std::to_string(drift) + " at t = " + std::to_string(r.t));
    }
    const double div = scaled_divergence(state_.u);
    result_.max_divergence = std::max(result_.max_divergence, div);
    if (div > divergence_tolerance) {
        violation("divergence: scaled max |div u| = " + std::to_string(div) + " at t = " + std::to_string(r.t));
    }
    if (result_.grad_control_applicable) {
        const GradientControl g = gradient_control_check(r, report_.beta, report_.condition_altass, mean_zero_);
        const double relative = g.margin / g.scale;
        if (result_.records.empty() || relative < result_.worst_grad_control) {
            result_.worst_grad_control = relative;
        }
        if (!g.pass) {
            violation("gradient control: ||grad mu||^2 - beta ||grad phi||^2 = " + std::to_string(g.margin) +
                      " at t = " + std::to_string(r.t));
        }
    }
    if (!coercivity_floor(r, report_, kernel_.grid().measure()).pass) {
        violation("coercivity floor: 2 interaction + 2 int F < alpha ||phi||^2 - 2 c2 |Omega| at t = " +
                  std::to_string(r.t));
    }
    if (!growth_floor(r, report_, kernel_.grid().measure()).pass) {
        violation("growth floor: int F < c7 int |phi|^{2+2q} - c8 |Omega| at t = " + std::to_string(r.t));
    }
    if (!csv_path_.empty()) {
        append_diagnostics(r, csv_path_);
    }
    result_.records.push_back(r);
    last_record_ = r;
    recorded_ = true;
}

bool Simulation::advance() {
    if (done()) {
        return false;
    }
    recorded_ = false;
    try {
        step_t_ = state_.t;
        state_ = step(state_, params_, kernel_, config_.potential, config_.forcing, &step_mu_);
    } catch (const BlowUpError&) {
        result_.blew_up = true;
        stopped_ = true;
        violation("blow-up: non-finite values at step " + std::to_string(step_ + 1) + " (t = " +
                  std::to_string(state_.t + params_.dt) + ")");
        return false;
    }
    ++step_;
    // t = step * dt exactly, rather than a running sum of dt.
    state_.t = static_cast<double>(step_) * params_.dt;
    result_.steps_taken = step_;

    if (assert_monotone_) {
        const double energy = total_energy(state_, kernel_, config_.potential).total;
        const double margin = energy_prev_ - energy;
        if (margin < result_.monotonicity.worst_margin) {
            result_.monotonicity.worst_margin = margin;
            result_.monotonicity.worst_t = state_.t;
        }
        energy_prev_ = energy;
    }

    const bool last = step_ >= total_steps_;
    if (step_ % config_.output.record_every == 0 || last) {
        record();
    }
    if (!options_.write_output || config_.output.dir.empty() || config_.output.snapshot_every <= 0) {
        // nothing to write
    } else if (step_ % config_.output.snapshot_every == 0) {
        const std::filesystem::path dir(config_.output.dir);
        write_snapshot(state_.phi, "phi", state_.t, (dir / snapshot_name("phi", step_)).string());
        write_snapshot(state_.u.x(), "ux", state_.t, (dir / snapshot_name("ux", step_)).string());
        write_snapshot(state_.u.y(), "uy", state_.t, (dir / snapshot_name("uy", step_)).string());
    }

    if (result_.energy_stable) {
        const double lo = state_.phi.values().minCoeff();
        const double hi = state_.phi.values().maxCoeff();
        if (lo < result_.validated_range.lo || hi > result_.validated_range.hi) {
            violation("range exit: phi left the validated range [" + std::to_string(result_.validated_range.lo) +
                      ", " + std::to_string(result_.validated_range.hi) + "] at step " + std::to_string(step_));
            stopped_ = true;
            if (!recorded_) {
                record();
            }
            return false;
        }
    }
    return !done();
}

void Simulation::run_to_end() {
    if (step_ == 0 && options_.write_output && !config_.output.dir.empty() && config_.output.snapshot_every > 0) {
        const std::filesystem::path dir(config_.output.dir);
        write_snapshot(state_.phi, "phi", state_.t, (dir / snapshot_name("phi", 0)).string());
        write_snapshot(state_.u.x(), "ux", state_.t, (dir / snapshot_name("ux", 0)).string());
        write_snapshot(state_.u.y(), "uy", state_.t, (dir / snapshot_name("uy", 0)).string());
    }
    while (advance()) {
    }
}

RunResult Simulation::finish() {
    const double E0 = result_.records.front().total_energy;
    if (assert_monotone_) {
        result_.monotonicity.slack = 1e-10 * (1.0 + std::abs(E0));
        result_.monotonicity.pass = result_.monotonicity.worst_margin >= -result_.monotonicity.slack;
        if (!result_.monotonicity.pass) {
            violation("energy increase: E(t_{n+1}) - E(t_n) = " + std::to_string(-result_.monotonicity.worst_margin) +
                      " at t = " + std::to_string(result_.monotonicity.worst_t));
        }
    }
    result_.energy_inequality = energy_inequality_check(result_.records, params_.nu);
    if (result_.energy_inequality_asserted && !result_.energy_inequality.pass) {
        violation("energy inequality: margin " + std::to_string(result_.energy_inequality.worst_margin) +
                  " at t = " + std::to_string(result_.energy_inequality.worst_t));
    }
    if (config_.checks.dissipative) {
        const EnvelopeConstants constants = envelope_constants(kernel_, config_.potential, params_.nu,
                                                               config_.forcing, mean0_, velocity_mean_zero_);
        result_.envelope = dissipative_envelope(result_.records, constants);
        if (!constants.applicable) {
            result_.notes.push_back("dissipative estimate not applicable: " + constants.reason);
        } else if (!result_.envelope.pass) {
            violation("dissipative envelope: margin " + std::to_string(result_.envelope.worst_margin) +
                      " at t = " + std::to_string(result_.envelope.worst_t));
        }
    }
    result_.steps_taken = step_;
    return result_;
}

RunResult run(const SimConfig& config, const RunOptions& options) {
    Simulation sim(config, initial_state(config, options.seed), options);
    sim.run_to_end();
    return sim.finish();
}

}  // namespace nlchns
