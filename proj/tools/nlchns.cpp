#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlchns/diagnostics.hpp"
#include "nlchns/harness.hpp"
#include "nlchns/hypotheses.hpp"
#include "nlchns/io.hpp"
#include "nlchns/simulation.hpp"

using namespace nlchns;

namespace {

void print_problems(const ConfigError& err) {
    std::cerr << "invalid configuration:\n";
    for (const auto& p : err.problems()) {
        std::cerr << "  - " << p << "\n";
    }
}

void print_verdict(const std::string& label, const InequalityVerdict& v) {
    std::cout << label << " = " << (v.pass ? "PASS" : "FAIL") << " (worst margin " << v.worst_margin << " at t = "
              << v.worst_t << ", slack " << v.slack << ")\n";
}

void print_envelope(const EnvelopeCheck& e) {
    const EnvelopeConstants& c = e.constants;
    if (!e.applicable) {
        std::cout << "dissipative_envelope = NOT APPLICABLE (" << c.reason << ")\n";
        return;
    }
    std::cout << "dissipative_envelope = " << (e.pass ? "PASS" : "FAIL") << " (k = " << c.k << ", K = " << c.K
              << ", F(m)|Omega| = " << c.offset << ", worst margin " << e.worst_margin << " at t = " << e.worst_t
              << ")\n";
}

int cmd_run(const std::string& path, bool force, std::optional<std::uint64_t> seed) {
    const SimConfig config = load_config(path);
    RunOptions options;
    options.force = force;
    options.seed = seed;
    RunResult r;
    try {
        r = run(config, options);
    } catch (const HypothesisGateError& err) {
        std::cerr << err.what() << "\n" << to_text(err.report());
        return 2;
    }
    std::cout << "steps = " << r.steps_taken << "\n";
    std::cout << "stabilizer = " << r.stabilizer << "\n";
    std::cout << "validated_range = " << r.validated_range.lo << ", " << r.validated_range.hi << "\n";
    std::cout << "max_mass_drift = " << r.max_mass_drift << "\n";
    std::cout << "max_scaled_divergence = " << r.max_divergence << "\n";
    if (r.monotonicity_checked) {
        print_verdict("energy_monotonicity", r.monotonicity);
    }
    print_verdict(r.energy_inequality_asserted ? "energy_inequality" : "energy_inequality (not asserted)",
                  r.energy_inequality);
    if (r.grad_control_applicable) {
        std::cout << "worst_relative_grad_control_margin = " << r.worst_grad_control << "\n";
    }
    if (config.checks.dissipative) {
        print_envelope(r.envelope);
    }
    for (const auto& note : r.notes) {
        std::cout << "note: " << note << "\n";
    }
    if (r.blew_up && !r.records.empty()) {
        std::cout << "last good record: " << format_diagnostics_row(r.records.back()) << "\n";
    }
    for (const auto& v : r.violations) {
        std::cout << "VIOLATION " << v << "\n";
    }
    std::cout << (r.ok() ? "OK" : "FAILED") << "\n";
    return r.ok() ? 0 : 1;
}

int cmd_check(const std::string& path) {
    const SimConfig config = load_config(path);
    const KernelOnGrid kernel = build_kernel(config.kernel, config.grid());
    const HypothesisReport report = audit(kernel, config.potential, config.range, config.checks.dissipative);
    std::cout << to_text(report);
    std::cout << (report.all_pass() ? "PASS" : "FAIL") << "\n";
    return report.all_pass() ? 0 : 1;
}

int emit_study(const StudyResult& study, const SimConfig& config) {
    std::cout << study.summary();
    if (!config.output.dir.empty()) {
        std::filesystem::create_directories(config.output.dir);
        const auto path = std::filesystem::path(config.output.dir) / (study.name + ".csv");
        std::ofstream(path) << study.to_csv();
        std::cout << "wrote " << path.string() << "\n";
    } else {
        std::cout << study.to_csv();
    }
    return study.pass() ? 0 : 1;
}

int cmd_convergence(const std::string& path, const std::vector<int>& sizes, const std::vector<double>& dts) {
    const SimConfig config = load_config(path);
    if (sizes.empty() == dts.empty()) {
        std::cerr << "convergence: give exactly one of --sizes or --dts\n";
        return 2;
    }
    return emit_study(sizes.empty() ? dt_order_study(config, dts) : galerkin_refinement(config, sizes), config);
}

int cmd_benchmark(const std::string& which, const std::string& path) {
    if (which != "taylor-green") {
        std::cerr << "unknown benchmark '" << which << "'; available: taylor-green\n";
        return 2;
    }
    const SimConfig config = load_config(path);
    return emit_study(taylor_green(config), config);
}

int cmd_report(const std::string& csv, std::string config_path) {
    const std::vector<DiagnosticsRecord> records = read_diagnostics(csv);
    if (records.empty()) {
        std::cerr << "report: no data rows in '" << csv << "'\n";
        return 2;
    }
    if (config_path.empty()) {
        config_path = (std::filesystem::path(csv).parent_path() / "run.cfg").string();
    }
    const SimConfig config = load_config(config_path);
    const Grid grid = config.grid();
    const KernelOnGrid kernel = build_kernel(config.kernel, grid);
    const SimState start = initial_state(config);
    const bool silent = config.forcing.family == ForcingFamily::zero ||
                        (config.forcing.amplitude[0] == 0.0 && config.forcing.amplitude[1] == 0.0);

    bool ok = true;
    const InequalityVerdict ineq = energy_inequality_check(records, config.params.nu);
    print_verdict(silent ? "energy_inequality" : "energy_inequality (not asserted, forced run)", ineq);
    ok = ok && (ineq.pass || !silent);

    const Range range{std::min(config.range.lo, start.phi.values().minCoeff() - 0.5),
                      std::max(config.range.hi, start.phi.values().maxCoeff() + 0.5)};
    const bool stable = config.stabilizer_auto || config.params.stabilizer >= stabilizer_bound(config.potential, range);
    if (stable && silent) {
        const InequalityVerdict mono = energy_monotonicity_check(records);
        print_verdict("energy_monotonicity", mono);
        ok = ok && mono.pass;
    }

    double worst_drift = 0.0;
    for (const auto& r : records) {
        worst_drift = std::max(worst_drift, std::abs(r.mass - records.front().mass) / grid.measure());
    }
    std::cout << "max_mass_drift = " << worst_drift << "\n";
    ok = ok && worst_drift <= 1e-12;

    const double umean = std::max(std::abs(mean(start.u.x())), std::abs(mean(start.u.y())));
    const EnvelopeConstants constants =
        envelope_constants(kernel, config.potential, config.params.nu, config.forcing,
                           records.front().mass / grid.measure(), umean <= 1e-12 * (1.0 + start.u.max_abs()));
    const EnvelopeCheck envelope = dissipative_envelope(records, constants);
    print_envelope(envelope);
    if (config.checks.dissipative && envelope.applicable) {
        ok = ok && envelope.pass;
    }

    if (config.checks.grad_control) {
        double worst = 0.0;
        for (const auto& r : records) {
            worst = std::min(worst, r.grad_control_margin);
        }
        std::cout << "min_grad_control_margin = " << worst << "\n";
    }
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal Cahn-Hilliard-Navier-Stokes simulator and invariant checker"};
    app.require_subcommand(1);

    std::string config_path;
    bool force = false;
    std::optional<std::uint64_t> seed;
    auto* run_cmd = app.add_subcommand("run", "run a simulation");
    run_cmd->add_option("config", config_path, "configuration file")->required();
    run_cmd->add_flag("--force", force, "skip the hypothesis gate");
    run_cmd->add_option("--seed", seed, "override initial.seed");

    auto* check_cmd = app.add_subcommand("check", "audit the hypotheses for a configuration");
    check_cmd->add_option("config", config_path, "configuration file")->required();

    std::vector<int> sizes;
    std::vector<double> dts;
    auto* conv_cmd = app.add_subcommand("convergence", "grid refinement or time-step order study");
    conv_cmd->add_option("config", config_path, "configuration file")->required();
    conv_cmd->add_option("--sizes", sizes, "grid sizes, e.g. 32,64,128")->delimiter(',');
    conv_cmd->add_option("--dts", dts, "time steps, e.g. 1e-2,5e-3,2.5e-3")->delimiter(',');

    std::string benchmark;
    auto* bench_cmd = app.add_subcommand("benchmark", "exact-solution benchmarks");
    bench_cmd->add_option("name", benchmark, "benchmark name (taylor-green)")->required();
    bench_cmd->add_option("config", config_path, "configuration file")->required();

    std::string csv_path;
    std::string report_config;
    auto* report_cmd = app.add_subcommand("report", "re-audit a diagnostics CSV");
    report_cmd->add_option("csv", csv_path, "diagnostics.csv")->required();
    report_cmd->add_option("--config", report_config, "configuration (default: run.cfg next to the CSV)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            return cmd_run(config_path, force, seed);
        }
        if (*check_cmd) {
            return cmd_check(config_path);
        }
        if (*conv_cmd) {
            return cmd_convergence(config_path, sizes, dts);
        }
        if (*bench_cmd) {
            return cmd_benchmark(benchmark, config_path);
        }
        if (*report_cmd) {
            return cmd_report(csv_path, report_config);
        }
    } catch (const ConfigError& err) {
        print_problems(err);
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}
