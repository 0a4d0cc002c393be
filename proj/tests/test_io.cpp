#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include <unistd.h>

#include "nlchns/io.hpp"
#include "support.hpp"

using namespace nlchns;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("nlchns_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& bytes) { std::ofstream(path, std::ios::binary) << bytes; }

const char* minimal_config =
    "grid.n = 16\n"
    "grid.l = 6.283185307179586\n"
    "kernel = gaussian\n"
    "kernel.sigma = 0.5\n"
    "potential = double_well\n"
    "nu = 0.1\n"
    "dt = 1e-3\n"
    "t_end = 0.01\n";

}  // namespace

TEST_SUITE("io") {

TEST_CASE("snapshot round trip is bit exact") {
    TempDir dir("snap");
    const Grid g(16, 2.5);
    ScalarField f = random_field(g, 3);
    f(0, 0) = std::numeric_limits<double>::denorm_min();
    f(1, 0) = -0.0;
    write_snapshot(f, "phi", 0.125, dir.file("a.snap"));
    const Snapshot s = read_snapshot(dir.file("a.snap"));
    CHECK(s.name == "phi");
    CHECK(s.t == 0.125);
    CHECK(s.field.grid() == g);
    CHECK((s.field.values() == f.values()).all());
    CHECK(std::signbit(s.field(1, 0)));
    CHECK(slurp(dir.file("a.snap")).rfind("NLCHNS1 phi 16 ", 0) == 0);
}

TEST_CASE("malformed snapshots are rejected") {
    TempDir dir("badsnap");
    const Grid g(8, 1.0);
    write_snapshot(random_field(g, 1), "phi", 0.0, dir.file("good.snap"));
    const std::string good = slurp(dir.file("good.snap"));

    spit(dir.file("trunc.snap"), good.substr(0, good.size() - 3));
    CHECK_THROWS_AS(read_snapshot(dir.file("trunc.snap")), FormatError);
    spit(dir.file("trail.snap"), good + "x");
    CHECK_THROWS_AS(read_snapshot(dir.file("trail.snap")), FormatError);
    spit(dir.file("magic.snap"), "NLCHNS9" + good.substr(7));
    CHECK_THROWS_AS(read_snapshot(dir.file("magic.snap")), FormatError);
    spit(dir.file("header.snap"), "NLCHNS1 phi 12 1 0 144 LE\n" + std::string(144 * 8, '\0'));
    CHECK_THROWS_AS(read_snapshot(dir.file("header.snap")), FormatError);
    spit(dir.file("count.snap"), "NLCHNS1 phi 8 1 0 65 LE\n" + std::string(65 * 8, '\0'));
    CHECK_THROWS_AS(read_snapshot(dir.file("count.snap")), FormatError);
    CHECK_THROWS(read_snapshot(dir.file("missing.snap")));
    CHECK_THROWS_AS(write_snapshot(random_field(g, 1), "two words", 0.0, dir.file("x.snap")), std::invalid_argument);
}

TEST_CASE("diagnostics CSV round trip is bit exact") {
    TempDir dir("csv");
    std::vector<DiagnosticsRecord> rows;
    for (int k = 0; k < 4; ++k) {
        DiagnosticsRecord r;
        r.t = 0.1 * k;
        r.mass = 1.0 / 3.0 + k;
        r.kinetic = std::exp(-k);
        r.interaction = 1e-300 * k;
        r.bulk = -2.5e7;
        r.total_energy = std::sqrt(2.0) * k;
        r.grad_u_sq = 0.0;
        r.grad_mu_sq = std::numbers::pi;
        r.forcing_power = -1.0 / 7.0;
        r.identity_residual = 1e-17;
        r.grad_control_margin = -3.25;
        r.phi_min = -0.9999999999999999;
        r.phi_max = 0.1 + 0.2;
        rows.push_back(r);
        append_diagnostics(r, dir.file("d.csv"));
    }
    const std::string text = slurp(dir.file("d.csv"));
    CHECK(text.rfind("t,mass,kinetic,interaction,bulk,total_energy,grad_u_sq,grad_mu_sq,forcing_power,"
                     "identity_residual,grad_control_margin,phi_min,phi_max\n", 0) == 0);
    const auto back = read_diagnostics(dir.file("d.csv"));
    REQUIRE(back.size() == rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(format_diagnostics_row(back[k]) == format_diagnostics_row(rows[k]));
        CHECK(back[k].phi_max == rows[k].phi_max);
        CHECK(back[k].mass == rows[k].mass);
    }
    spit(dir.file("bad.csv"), text + "1,2,3\n");
    CHECK_THROWS_AS(read_diagnostics(dir.file("bad.csv")), FormatError);
    spit(dir.file("hdr.csv"), "t,mass\n1,2\n");
    CHECK_THROWS_AS(read_diagnostics(dir.file("hdr.csv")), FormatError);
}

TEST_CASE("counter-based deviates") {
    CHECK(counter_uniform(7, 123) == counter_uniform(7, 123));
    CHECK(counter_uniform(7, 123) != counter_uniform(8, 123));
    double sum = 0.0, lo = 1.0, hi = -1.0;
    std::set<double> seen;
    const int count = 100000;
    for (int k = 0; k < count; ++k) {
        const double u = counter_uniform(42, static_cast<std::uint64_t>(k));
        sum += u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        seen.insert(u);
    }
    CHECK(lo >= -1.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(sum / count) < 0.01);  // mean 0, standard error ~ 0.0018
    CHECK(seen.size() == static_cast<std::size_t>(count));
}

TEST_CASE("initial conditions") {
    const Grid g(32, two_pi);
    InitialSpec spec;
    spec.family = InitialFamily::random;
    spec.amplitude = 0.1;
    spec.mean = 0.3;
    spec.seed = 9;
    const ScalarField phi = initial_phi(spec, g);
    CHECK(mean(phi) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK((phi.values() - 0.3).abs().maxCoeff() == doctest::Approx(0.1));
    CHECK((initial_phi(spec, g).values() == phi.values()).all());
    spec.seed = 10;
    CHECK_FALSE((initial_phi(spec, g).values() == phi.values()).all());
    spec.max_mode = 2;
    const SpectrumField hat = transform(initial_phi(spec, g));
    CHECK(std::abs(hat(3, 0)) <= 1e-16);
    CHECK(std::abs(hat(0, 3)) <= 1e-16);

    InitialSpec strip;
    strip.family = InitialFamily::tanh_strip;
    strip.width = 0.2;
    const ScalarField s = initial_phi(strip, g);
    CHECK(s(0, 16) == doctest::Approx(std::tanh(0.25 * two_pi / 0.2)));
    CHECK(s(0, 0) == doctest::Approx(-std::tanh(0.25 * two_pi / 0.2)));

    InitialSpec tg;
    tg.velocity = VelocityFamily::taylor_green;
    tg.velocity_amplitude = 2.0;
    const VectorField u = initial_velocity(tg, g);
    CHECK(u.x()(8, 0) == doctest::Approx(2.0));  // sin(pi/2) cos(0)
    CHECK(scaled_divergence(u) < 1e-15);
}

TEST_CASE("initial fields from snapshots") {
    TempDir dir("init");
    const Grid g(16, two_pi);
    const ScalarField f = random_field(g, 2);
    write_snapshot(f, "phi", 0.0, dir.file("phi.snap"));
    write_snapshot(random_field(g, 3), "ux", 0.0, dir.file("ux.snap"));
    write_snapshot(random_field(g, 4), "uy", 0.0, dir.file("uy.snap"));
    InitialSpec spec;
    spec.family = InitialFamily::file;
    spec.path = dir.file("phi.snap");
    spec.velocity = VelocityFamily::file;
    spec.velocity_path_x = dir.file("ux.snap");
    spec.velocity_path_y = dir.file("uy.snap");
    CHECK((initial_phi(spec, g).values() == f.values()).all());
    CHECK(scaled_divergence(initial_velocity(spec, g)) < 1e-14);
    CHECK_THROWS_AS(initial_phi(spec, Grid(32, two_pi)), ConfigError);
}

TEST_CASE("configuration parsing") {
    const SimConfig c = parse_config(std::string(minimal_config) + "kernel.strength = 6\n# comment\n\n");
    CHECK(c.n == 16);
    CHECK(c.kernel.family == KernelFamily::gaussian);
    CHECK(c.kernel.sigma == 0.5);
    CHECK(c.kernel.strength == 6.0);
    CHECK(c.params.dt == 1e-3);
    CHECK(c.steps() == 10);
    CHECK(c.stabilizer_auto);
    CHECK(c.params.dealias);
    CHECK(c.output.record_every == 1);

    const SimConfig full = parse_config(
        "grid.n = 32\ngrid.l = 3\nkernel = spectral\nkernel.symbol = 0:1, 1:0.25\n"
        "potential = polynomial\npotential.coefficients = 1, 0, -2, 0, 1\npotential.range = -3, 3\n"
        "nu = 0.5\ndt = 0.01\nt_end = 1\nstabilizer = 4.5\nscheme.dealias = false\n"
        "scheme.force_form = mu_grad_phi\nforcing = single_mode\nforcing.amplitude = 0.3\nforcing.mode = 2, 1\n"
        "forcing.decay = 0.2\ninitial = tanh_strip\ninitial.width = 0.3\nu0 = taylor_green\nu0.amplitude = 0.5\n"
        "output.record_every = 5\noutput.snapshot_every = 50\noutput.dir = out\n"
        "checks.enforce_hypotheses = false\nchecks.grad_control = true\nchecks.dissipative = true\n");
    CHECK(full.kernel.symbol.at(1) == 0.25);
    CHECK(full.potential.F.degree() == 4);
    CHECK(full.range.lo == -3.0);
    CHECK_FALSE(full.stabilizer_auto);
    CHECK(full.params.stabilizer == 4.5);
    CHECK_FALSE(full.params.dealias);
    CHECK(full.params.force_form == ForceForm::mu_grad_phi);
    CHECK(full.forcing.mode == std::array<int, 2>{2, 1});
    CHECK(full.initial.family == InitialFamily::tanh_strip);
    CHECK(full.initial.velocity == VelocityFamily::taylor_green);
    CHECK(full.output.snapshot_every == 50);
    CHECK_FALSE(full.checks.enforce_hypotheses);
    CHECK(full.checks.dissipative);

    // to_text is a fixed point of the parser.
    const std::string text = to_text(full);
    CHECK(to_text(parse_config(text)) == text);
    CHECK(to_text(parse_config(to_text(c))) == to_text(c));
}

TEST_CASE("configuration errors are collected") {
    try {
        parse_config("grid.n = 48\nkernel = gaussian\nkernel.sigma = -1\nnu = 0.1\ndt = 0\nt_end = 1\n"
                     "colour = blue\nnonsense line\ndt = 2\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        const auto& p = err.problems();
        const auto has = [&](const std::string& needle) {
            return std::any_of(p.begin(), p.end(), [&](const std::string& s) { return s.find(needle) != s.npos; });
        };
        CHECK(has("grid.n must be a power of two"));
        CHECK(has("kernel.sigma must be positive"));
        CHECK(has("missing required key 'grid.l'"));
        CHECK(has("colour"));
        CHECK(has("line 8"));
        CHECK(has("duplicate key 'dt'"));
        CHECK(p.size() >= 6);
    }
    CHECK_THROWS_AS(parse_config(std::string(minimal_config) + "stabilizer = lots\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(minimal_config) + "initial = spiral\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(minimal_config) + "potential.range = 2, 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(minimal_config) + "forcing = body\nforcing.amplitude = 1\n"),
                    ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), std::exception);
}

}
