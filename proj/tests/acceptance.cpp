// Desk-scale acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "nlchns/harness.hpp"
#include "nlchns/hypotheses.hpp"
#include "nlchns/io.hpp"
#include "nlchns/simulation.hpp"

using namespace nlchns;
namespace fs = std::filesystem;

namespace {

constexpr double two_pi = 6.283185307179586;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

ScalarField random_field(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    ScalarField f(g);
    for (int i = 0; i < g.n(); ++i) {
        for (int j = 0; j < g.n(); ++j) {
            f(i, j) = d(rng);
        }
    }
    return f;
}

const std::string common =
    "grid.l = 6.283185307179586\n"
    "kernel = gaussian\nkernel.sigma = 0.5\nkernel.strength = 6\n"
    "potential = double_well\n"
    "nu = 0.1\ndt = 1e-3\n"
    "initial = random\ninitial.amplitude = 0.1\ninitial.seed = 7\n";

const RunOptions quiet{false, std::nullopt, false};

// Shared by criteria 2 and 3.
const RunResult& spinodal() {
    static const RunResult r = run(parse_config("grid.n = 64\n" + common + "t_end = 10\noutput.record_every = 1\n"),
                                   quiet);
    return r;
}

Outcome convolution_oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    const Grid g(32, two_pi);
    const KernelOnGrid k = build_kernel(KernelSpec::gaussian(0.5, 6.0), g);
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const ScalarField f = random_field(g, rng);
        const ScalarField ref = convolution_oracle(k, f);
        worst = std::max(worst, norm_l2(convolve(k, f) - ref) / norm_l2(ref));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst <= 1e-10 && secs < 10.0, fmt("max relative error %.2e, %.2f s", worst, secs)};
}

Outcome mass_conservation() {
    const RunResult& r = spinodal();
    const double m0 = r.records.front().mass;
    double worst = 0.0;
    for (const auto& rec : r.records) {
        worst = std::max(worst, std::abs(rec.mass - m0) / (two_pi * two_pi));
    }
    const bool full = r.steps_taken == 10000 && !r.blew_up;
    return {full && worst <= 1e-12, fmt("%g steps, max |mean drift| %.2e", static_cast<double>(r.steps_taken), worst)};
}

Outcome discrete_energy_law() {
    const RunResult& r = spinodal();
    const bool pass = r.steps_taken == 10000 && r.monotonicity_checked && r.monotonicity.pass &&
                      r.energy_inequality_asserted && r.energy_inequality.pass;
    return {pass, fmt("worst step decrease %.2e (slack %.2e), inequality margin %.2e", r.monotonicity.worst_margin,
                      r.monotonicity.slack, r.energy_inequality.worst_margin)};
}

Outcome residual_order() {
    // Smooth regime: dt k_max^2 (a + S) small over the resolved modes.
    const SimConfig c = parse_config(
        "grid.n = 32\ngrid.l = 25.132741228718345\nkernel = gaussian\nkernel.sigma = 0.5\nkernel.strength = 6\n"
        "potential = double_well\nnu = 0.1\ndt = 1e-2\nt_end = 0.5\ninitial = random\ninitial.mean = 0.8\n"
        "initial.amplitude = 0.1\ninitial.max_mode = 1\ninitial.seed = 3\nu0 = taylor_green\nu0.amplitude = 0.5\n");
    const StudyResult s = dt_order_study(c, {1e-2, 5e-3, 2.5e-3});
    bool pass = !s.orders.empty();
    std::string orders;
    for (const auto& [label, order] : s.orders) {
        if (label.rfind("max_abs_residual", 0) == 0) {
            pass = pass && order >= 0.8 && order <= 1.2;
            orders += fmt(" %.3f", order);
        }
    }
    return {pass && orders.size() > 0, "residual orders" + orders};
}

Outcome taylor_green_benchmark() {
    const SimConfig c = parse_config("grid.n = 64\ngrid.l = 6.283185307179586\nkernel = gaussian\nkernel.sigma = 0.5\n"
                                     "kernel.strength = 6\npotential = double_well\nnu = 0.01\ndt = 1e-3\nt_end = 1\n"
                                     "initial = uniform\nu0 = taylor_green\nu0.amplitude = 1\n");
    const StudyResult s = taylor_green(c);
    return {s.pass(), fmt("relative error %.2e, orders %.3f %.3f", s.metric(0, "rel_error"), s.orders.at(0).second,
                          s.orders.at(1).second)};
}

Outcome interaction_identity() {
    const Grid g(16, two_pi);
    const KernelOnGrid k = build_kernel(KernelSpec::gaussian(0.5, 6.0), g);
    const int n = g.n();
    const double dv = g.cell_volume();
    std::mt19937_64 rng(2);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const ScalarField f = random_field(g, rng);
        double quad = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                for (int p = 0; p < n; ++p) {
                    for (int q = 0; q < n; ++q) {
                        const double d = f(i, j) - f(p, q);
                        quad += k.samples((i - p + n) % n, (j - q + n) % n) * d * d;
                    }
                }
            }
        }
        quad *= 0.5 * dv * dv;
        const double spectral = k.a * inner(f, f) - inner(f, convolve(k, f));
        worst = std::max(worst, std::abs(quad - spectral) / std::abs(quad));
    }
    return {worst <= 1e-9, fmt("max relative error %.2e", worst)};
}

Outcome gradient_control() {
    const SimConfig c = parse_config(
        "grid.n = 64\ngrid.l = 6.283185307179586\nkernel = gaussian\nkernel.sigma = 1\nkernel.strength = 0.1\n"
        "potential = quartic\npotential.a4 = 0.25\npotential.a2 = 1\nnu = 0.1\ndt = 1e-3\nt_end = 1\n"
        "initial = random\ninitial.amplitude = 0.5\ninitial.seed = 7\nu0 = taylor_green\nu0.amplitude = 0.5\n"
        "checks.grad_control = true\n");
    const RunResult r = run(c, quiet);
    const bool pass = r.report.condition_altass && r.grad_control_applicable && r.worst_grad_control >= -1e-8 &&
                      r.steps_taken == 1000;
    return {pass, fmt("beta %.4f, worst relative margin %.2e", r.report.beta, r.worst_grad_control)};
}

Outcome dissipative_envelope_runs() {
    bool pass = true;
    std::string detail;
    for (const char* m : {"0", "0.3"}) {
        const SimConfig c = parse_config("grid.n = 64\n" + common + "t_end = 5\ninitial.mean = " + std::string(m) +
                                         "\nu0 = taylor_green\nu0.amplitude = 0.5\nchecks.dissipative = true\n"
                                         "output.record_every = 10\n");
        const RunResult r = run(c, quiet);
        const bool ok = r.envelope.applicable && r.envelope.pass && r.steps_taken == 5000;
        pass = pass && ok;
        detail += std::string(detail.empty() ? "" : "; ") + "m = " + m +
                  fmt(": worst margin %.3g at t = %.3g", r.envelope.worst_margin, r.envelope.worst_t);
    }
    return {pass, detail};
}

Outcome auditor_ground_truth() {
    const Grid g(64, two_pi);
    const HypothesisReport r =
        audit(build_kernel(KernelSpec::gaussian(0.5, 6.0), g), PotentialSpec::double_well(), Range{}, true);
    const bool pass = std::abs(r.m0 - 4.0) <= 1e-10 && r.p == 4.0 / 3.0 && std::abs(r.a_star - 6.0) <= 1e-12 &&
                      std::abs(r.c0 - 2.0) <= 1e-8;
    return {pass, fmt("m0 = %.12g, p = %.17g, c0 = %.12g", r.m0, r.p, r.c0)};
}

Outcome refinement() {
    // The datum must be resolved on the coarsest grid.
    const SimConfig c = parse_config("grid.n = 128\n" + common +
                                     "t_end = 0.5\ninitial.max_mode = 4\nu0 = taylor_green\nu0.amplitude = 0.5\n");
    const StudyResult s = galerkin_refinement(c, {32, 64, 128});
    return {s.pass(), fmt("diff_phi %.2e -> %.2e", s.metric(0, "diff_phi_to_next"), s.metric(1, "diff_phi_to_next"))};
}

Outcome leray_projector() {
    const Grid g(64, two_pi);
    std::mt19937_64 rng(3);
    double idem = 0.0, div = 0.0, grad = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const VectorField v(random_field(g, rng), random_field(g, rng));
        const VectorField p = leray_project(v);
        const VectorField pp = leray_project(p);
        idem = std::max(idem, norm_l2(pp - p) / norm_l2(p));
        div = std::max(div, scaled_divergence(p));
        const VectorField gphi = gradient(random_field(g, rng));
        grad = std::max(grad, norm_l2(leray_project(gphi)) / norm_l2(gphi));
    }
    const bool pass = idem <= 1e-12 && div <= 1e-12 && grad <= 1e-12;
    return {pass, fmt("idempotence %.2e, divergence %.2e, gradient residue %.2e", idem, div, grad)};
}

Outcome determinism() {
    const fs::path base = fs::temp_directory_path() / ("nlchns_acceptance_" + std::to_string(::getpid()));
    std::string csv[2];
    for (int k = 0; k < 2; ++k) {
        const fs::path dir = base / std::to_string(k);
        fs::remove_all(dir);
        run(parse_config("grid.n = 32\n" + common + "t_end = 0.5\nu0 = taylor_green\nu0.amplitude = 0.5\n"
                                                    "output.record_every = 5\noutput.dir = " + dir.string() + "\n"),
            RunOptions{false, 11, true});
        std::ifstream in(dir / "diagnostics.csv", std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        csv[k] = os.str();
    }
    fs::remove_all(base);
    return {!csv[0].empty() && csv[0] == csv[1], fmt("%g bytes", static_cast<double>(csv[0].size()))};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"convolution oracle equivalence", convolution_oracle_equivalence},
        {"mass conservation", mass_conservation},
        {"discrete energy law", discrete_energy_law},
        {"energy-identity residual order", residual_order},
        {"Taylor-Green", taylor_green_benchmark},
        {"interaction-energy identity", interaction_identity},
        {"gradient-control inequality", gradient_control},
        {"dissipative envelope", dissipative_envelope_runs},
        {"hypothesis auditor ground truth", auditor_ground_truth},
        {"Galerkin refinement", refinement},
        {"Leray projector", leray_projector},
        {"determinism", determinism},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
