#include "nlchns/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <sstream>

#include "nlchns/simulation.hpp"

namespace nlchns {

namespace {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double observed_order(double coarse, double fine, double ratio) { return std::log(coarse / fine) / std::log(ratio); }

bool in_first_order_band(double order) { return order >= 0.8 && order <= 1.2; }

RunOptions study_options() {
    RunOptions o;
    o.force = true;
    o.write_output = false;
    return o;
}

}  // namespace

bool StudyResult::pass() const {
    return !verdicts.empty() &&
           std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.second; });
}

double StudyResult::metric(std::size_t level, const std::string& name) const {
    const auto it = std::find(metric_names.begin(), metric_names.end(), name);
    if (it == metric_names.end() || level >= metrics.size()) {
        throw std::out_of_range("no metric '" + name + "' at level " + std::to_string(level));
    }
    return metrics[level][static_cast<std::size_t>(it - metric_names.begin())];
}

std::string StudyResult::to_csv() const {
    std::ostringstream os;
    os << level_label;
    for (const auto& m : metric_names) {
        os << "," << m;
    }
    os << "\n";
    for (std::size_t k = 0; k < metrics.size(); ++k) {
        os << format_real(levels[k]);
        for (double v : metrics[k]) {
            os << "," << format_real(v);
        }
        os << "\n";
    }
    return os.str();
}

std::string StudyResult::summary() const {
    std::ostringstream os;
    os << name << "\n";
    for (std::size_t k = 0; k < metrics.size(); ++k) {
        os << "  " << level_label << " = " << levels[k] << ":";
        for (std::size_t m = 0; m < metric_names.size(); ++m) {
            os << " " << metric_names[m] << "=" << metrics[k][m];
        }
        os << "\n";
    }
    for (const auto& [label, order] : orders) {
        os << "  order " << label << " = " << order << "\n";
    }
    for (const auto& note : notes) {
        os << "  note: " << note << "\n";
    }
    for (const auto& [label, ok] : verdicts) {
        os << "  " << (ok ? "PASS " : "FAIL ") << label << "\n";
    }
    os << (pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

ScalarField convolution_oracle(const KernelOnGrid& kernel, const ScalarField& field) {
    require_same_grid(kernel.grid(), field.grid(), "convolution_oracle");
    const Grid& grid = field.grid();
    const int n = grid.n();
    if (n > 64) {
        throw StructuralError("convolution_oracle: grid n = " + std::to_string(n) + " exceeds 64");
    }
    const double dv = grid.cell_volume();
    const RealArray& J = kernel.samples.values();
    const RealArray& f = field.values();
    ScalarField out(grid);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double sum = 0.0;
            for (int p = 0; p < n; ++p) {
                const int di = (i - p + n) % n;
                for (int q = 0; q < n; ++q) {
                    sum += J(di, (j - q + n) % n) * f(p, q);
                }
            }
            out(i, j) = sum * dv;
        }
    }
    return out;
}

StudyResult taylor_green(const SimConfig& base) {
    std::vector<std::string> problems;
    if (std::abs(base.l - 2.0 * std::numbers::pi) > 1e-12) {
        problems.push_back("taylor-green benchmark needs grid.l = 2 pi");
    }
    if (base.initial.family != InitialFamily::uniform) {
        problems.push_back("taylor-green benchmark needs a uniform phi");
    }
    if (base.forcing.family != ForcingFamily::zero &&
        (base.forcing.amplitude[0] != 0.0 || base.forcing.amplitude[1] != 0.0)) {
        problems.push_back("taylor-green benchmark needs zero forcing");
    }
    if (!problems.empty()) {
        throw ConfigError(problems);
    }

    StudyResult result;
    result.name = "taylor-green";
    result.level_label = "dt";
    result.metric_names = {"kinetic", "exact", "rel_error"};
    const double A = base.initial.velocity_amplitude;
    const double ke0 = 0.25 * A * A * base.l * base.l;
    const double t_end = base.params.t_end;
    const double exact = ke0 * std::exp(-4.0 * base.params.nu * t_end);

    for (int level = 0; level < 3; ++level) {
        SimConfig c = base;
        c.initial.velocity = VelocityFamily::taylor_green;
        c.params.dt = base.params.dt / std::pow(2.0, level);
        c.output.record_every = static_cast<int>(std::max(1L, c.steps()));
        c.checks = {};
        Simulation sim(c, initial_state(c), study_options());
        sim.run_to_end();
        const RunResult r = sim.finish();
        const double ke = r.records.back().kinetic;
        const double err = exact != 0.0 ? std::abs(ke - exact) / exact : std::abs(ke);
        result.levels.push_back(c.params.dt);
        result.metrics.push_back({ke, exact, err});
        if (!r.ok()) {
            for (const auto& v : r.violations) {
                result.notes.push_back("dt = " + format_real(c.params.dt) + ": " + v);
            }
        }
    }
    const double e0 = result.metrics[0][2];
    result.verdicts.emplace_back("relative kinetic-energy error <= 1e-3 at the configured dt", e0 <= 1e-3);
    if (e0 == 0.0) {
        result.notes.push_back("zero error at every dt; orders are not defined");
        return result;
    }
    for (std::size_t k = 0; k + 1 < result.metrics.size(); ++k) {
        const double order = observed_order(result.metrics[k][2], result.metrics[k + 1][2], 2.0);
        result.orders.emplace_back("rel_error " + format_real(result.levels[k]) + " -> " +
                                       format_real(result.levels[k + 1]),
                                   order);
        result.verdicts.emplace_back("error halves with dt (order in [0.8, 1.2]) at level " + std::to_string(k),
                                     in_first_order_band(order));
    }
    return result;
}

StudyResult galerkin_refinement(const SimConfig& base, const std::vector<int>& sizes) {
    if (sizes.size() < 3 || !std::is_sorted(sizes.begin(), sizes.end()) ||
        std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end()) {
        throw ConfigError("galerkin refinement needs at least three strictly increasing grid sizes");
    }
    StudyResult result;
    result.name = "galerkin-refinement";
    result.level_label = "n";
    result.metric_names = {"sup_u", "sup_phi", "int_grad_mu_sq", "int_phi_V_sq", "diff_phi_to_next", "diff_u_to_next"};

    SimConfig finest = base;
    finest.n = sizes.back();
    const SimState data = initial_state(finest);

    std::vector<std::unique_ptr<Simulation>> sims;
    for (int n : sizes) {
        SimConfig c = base;
        c.n = n;
        c.checks = {};
        const Grid grid = c.grid();
        sims.push_back(std::make_unique<Simulation>(c, SimState{resample(data.phi, grid), resample(data.u, grid), 0.0},
                                                    study_options()));
    }
    const std::size_t L = sims.size();
    std::vector<double> sup_u(L, 0.0), sup_phi(L, 0.0), int_mu(L, 0.0), int_V(L, 0.0);
    std::vector<double> diff_phi(L, 0.0), diff_u(L, 0.0);
    std::vector<DiagnosticsRecord> prev(L);
    std::vector<double> prev_dphi(L, 0.0), prev_du(L, 0.0);

    // Left-endpoint quadrature: the value at a record weighs the interval that follows it.
    auto sample = [&](bool first) {
        for (std::size_t k = 0; k < L; ++k) {
            const DiagnosticsRecord& r = sims[k]->last_record();
            if (!first) {
                const double dt = r.t - prev[k].t;
                int_mu[k] += dt * prev[k].grad_mu_sq;
                int_V[k] += dt * (prev[k].phi_l2_sq + prev[k].grad_phi_sq);
                diff_phi[k] += dt * prev_dphi[k];
                diff_u[k] += dt * prev_du[k];
            }
            sup_u[k] = std::max(sup_u[k], std::sqrt(2.0 * r.kinetic));
            sup_phi[k] = std::max(sup_phi[k], std::sqrt(r.phi_l2_sq));
            prev[k] = r;
            if (k + 1 < L) {
                const Grid& fine = sims[k + 1]->state().phi.grid();
                const ScalarField dphi = resample(sims[k]->state().phi, fine) - sims[k + 1]->state().phi;
                const VectorField du = resample(sims[k]->state().u, fine) - sims[k + 1]->state().u;
                prev_dphi[k] = inner(dphi, dphi);
                prev_du[k] = inner(du, du);
            }
        }
    };

    sample(true);
    bool aborted = false;
    while (!sims.front()->done()) {
        for (auto& s : sims) {
            s->advance();
        }
        const bool all_recorded =
            std::all_of(sims.begin(), sims.end(), [](const auto& s) { return s->recorded_last_step(); });
        const bool any_stopped = std::any_of(sims.begin(), sims.end(), [](const auto& s) {
            return s->done() && s->step_index() < s->config().steps();
        });
        if (all_recorded) {
            sample(false);
        }
        if (any_stopped) {
            aborted = true;
            break;
        }
    }

    for (std::size_t k = 0; k < L; ++k) {
        RunResult r = sims[k]->finish();
        result.levels.push_back(sizes[k]);
        const bool has_next = k + 1 < L;
        result.metrics.push_back({sup_u[k], sup_phi[k], int_mu[k], int_V[k], has_next ? std::sqrt(diff_phi[k]) : 0.0,
                                  has_next ? std::sqrt(diff_u[k]) : 0.0});
        for (const auto& v : r.violations) {
            result.notes.push_back("n = " + std::to_string(sizes[k]) + ": " + v);
        }
    }
    if (aborted) {
        result.verdicts.emplace_back("all levels reached t_end", false);
        return result;
    }

    for (std::size_t m = 0; m < 4; ++m) {
        double lo = result.metrics[0][m], hi = lo;
        for (const auto& row : result.metrics) {
            lo = std::min(lo, row[m]);
            hi = std::max(hi, row[m]);
        }
        const bool uniform = hi == 0.0 || (lo > 0.0 && hi / lo <= 2.0);
        result.verdicts.emplace_back(result.metric_names[m] + " uniform across levels (max/min <= 2)", uniform);
    }
    bool decreasing = true;
    for (std::size_t k = 0; k + 2 < L; ++k) {
        decreasing = decreasing && result.metrics[k + 1][4] < result.metrics[k][4];
        result.orders.emplace_back("diff_phi n = " + std::to_string(sizes[k]) + " -> " + std::to_string(sizes[k + 1]),
                                   result.metrics[k][4] / result.metrics[k + 1][4]);
    }
    result.verdicts.emplace_back("inter-level L2(0,T;H) differences of phi strictly decreasing", decreasing);
    return result;
}

StudyResult dt_order_study(const SimConfig& base, const std::vector<double>& dts) {
    if (dts.size() < 3) {
        throw ConfigError("dt order study needs at least three time steps");
    }
    const double ratio = dts[0] / dts[1];
    std::vector<std::string> problems;
    for (std::size_t k = 0; k + 1 < dts.size(); ++k) {
        if (!(dts[k + 1] > 0.0) || std::abs(dts[k] / dts[k + 1] - ratio) > 1e-9 * ratio || !(ratio > 1.0)) {
            problems.push_back("time steps must form a decreasing geometric sequence");
            break;
        }
    }
    for (double dt : dts) {
        const double steps = base.params.t_end / dt;
        if (std::abs(steps - std::round(steps)) > 1e-9 * steps) {
            problems.push_back("t_end is not a multiple of dt = " + format_real(dt));
        }
    }
    if (!problems.empty()) {
        throw ConfigError(problems);
    }

    StudyResult result;
    result.name = "dt-order";
    result.level_label = "dt";
    result.metric_names = {"max_abs_residual", "diff_phi_to_next", "diff_u_to_next"};
    std::vector<SimState> finals;
    std::vector<double> residuals;
    for (double dt : dts) {
        SimConfig c = base;
        c.params.dt = dt;
        c.output.record_every = 1;
        c.checks = {};
        Simulation sim(c, initial_state(c), study_options());
        sim.run_to_end();
        const RunResult r = sim.finish();
        if (r.blew_up || r.steps_taken < c.steps()) {
            result.notes.push_back("dt = " + format_real(dt) + " stopped early: " +
                                   (r.violations.empty() ? std::string("?") : r.violations.front()));
            result.verdicts.emplace_back("all runs reached t_end", false);
            return result;
        }
        double worst = 0.0;
        for (std::size_t k = 1; k < r.records.size(); ++k) {
            worst = std::max(worst, std::abs(r.records[k].identity_residual));
        }
        residuals.push_back(worst);
        finals.push_back(sim.state());
        result.levels.push_back(dt);
    }
    for (std::size_t k = 0; k < dts.size(); ++k) {
        double dphi = 0.0, du = 0.0;
        if (k + 1 < dts.size()) {
            dphi = norm_l2(finals[k].phi - finals[k + 1].phi);
            du = norm_l2(finals[k].u - finals[k + 1].u);
        }
        result.metrics.push_back({residuals[k], dphi, du});
    }

    const auto add_order = [&](const std::string& label, double coarse, double fine) {
        if (coarse == 0.0 && fine == 0.0) {
            result.notes.push_back(label + ": zero at both levels");
            return;
        }
        const double order = observed_order(coarse, fine, ratio);
        result.orders.emplace_back(label, order);
        result.verdicts.emplace_back(label + " order in [0.8, 1.2]", in_first_order_band(order));
    };
    for (std::size_t k = 0; k + 1 < dts.size(); ++k) {
        add_order("max_abs_residual " + format_real(dts[k]) + " -> " + format_real(dts[k + 1]), residuals[k],
                  residuals[k + 1]);
    }
    for (std::size_t k = 0; k + 2 < dts.size(); ++k) {
        add_order("trajectory difference " + format_real(dts[k]) + " -> " + format_real(dts[k + 1]),
                  result.metrics[k][1] + result.metrics[k][2], result.metrics[k + 1][1] + result.metrics[k + 1][2]);
    }
    if (result.verdicts.empty()) {
        result.verdicts.emplace_back("steady state: zero residual and zero differences at every dt", true);
    }
    return result;
}

}  // namespace nlchns
