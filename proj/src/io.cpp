#include "nlchns/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace nlchns {

namespace {

constexpr const char* snapshot_magic = "NLCHNS1";

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        std::uint64_t out = 0;
        for (int b = 0; b < 8; ++b) {
            out = (out << 8) | ((v >> (8 * b)) & 0xffu);
        }
        return out;
    }
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

void write_snapshot(const ScalarField& field, const std::string& name, double t, const std::string& path) {
    if (name.empty() || name.find_first_of(" \t\n") != std::string::npos) {
        throw std::invalid_argument("snapshot name must be a single non-empty word");
    }
    const Grid& grid = field.grid();
    const long count = static_cast<long>(grid.n()) * grid.n();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << snapshot_magic << ' ' << name << ' ' << grid.n() << ' ' << format_real(grid.l()) << ' ' << format_real(t)
        << ' ' << count << " LE\n";
    const RealArray& v = field.values();
    std::vector<std::uint64_t> payload(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) {
        payload[static_cast<std::size_t>(k)] = to_little_endian(std::bit_cast<std::uint64_t>(v.data()[k]));
    }
    out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(count * 8));
    if (!out) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open snapshot '" + path + "'");
    }
    std::string header;
    if (!std::getline(in, header)) {
        throw FormatError("snapshot '" + path + "' has no header line");
    }
    std::istringstream fields(header);
    std::string magic, name, order;
    int n = 0;
    double l = 0.0, t = 0.0;
    long count = 0;
    if (!(fields >> magic) || magic != snapshot_magic) {
        throw FormatError("snapshot '" + path + "': bad magic");
    }
    if (!(fields >> name >> n >> l >> t >> count >> order) || order != "LE") {
        throw FormatError("snapshot '" + path + "': corrupt header");
    }
    std::optional<Grid> grid;
    try {
        grid.emplace(n, l);
    } catch (const std::exception& err) {
        throw FormatError("snapshot '" + path + "': " + err.what());
    }
    if (count != static_cast<long>(n) * n) {
        throw FormatError("snapshot '" + path + "': count does not match n^2");
    }
    std::vector<std::uint64_t> payload(static_cast<std::size_t>(count));
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(count * 8));
    if (in.gcount() != count * 8) {
        throw FormatError("snapshot '" + path + "': size mismatch, payload truncated");
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw FormatError("snapshot '" + path + "': size mismatch, trailing bytes");
    }
    Snapshot s{name, t, ScalarField(*grid)};
    for (long k = 0; k < count; ++k) {
        s.field.values().data()[k] = std::bit_cast<double>(to_little_endian(payload[static_cast<std::size_t>(k)]));
    }
    return s;
}

const std::vector<std::string>& diagnostics_columns() {
    static const std::vector<std::string> columns{
        "t",         "mass",          "kinetic",         "interaction",       "bulk",
        "total_energy", "grad_u_sq",  "grad_mu_sq",      "forcing_power",     "identity_residual",
        "grad_control_margin", "phi_min", "phi_max"};
    return columns;
}

std::string format_diagnostics_row(const DiagnosticsRecord& r) {
    const double values[] = {r.t,          r.mass,          r.kinetic,       r.interaction,       r.bulk,
                             r.total_energy, r.grad_u_sq,   r.grad_mu_sq,    r.forcing_power,     r.identity_residual,
                             r.grad_control_margin, r.phi_min, r.phi_max};
    std::string row;
    for (std::size_t k = 0; k < std::size(values); ++k) {
        row += (k ? "," : "") + format_real(values[k]);
    }
    return row;
}

void append_diagnostics(const DiagnosticsRecord& record, const std::string& csv_path) {
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(csv_path, ec) || std::filesystem::file_size(csv_path, ec) == 0;
    std::ofstream out(csv_path, std::ios::app);
    if (!out) {
        throw std::runtime_error("cannot open '" + csv_path + "' for appending");
    }
    if (fresh) {
        const auto& columns = diagnostics_columns();
        for (std::size_t k = 0; k < columns.size(); ++k) {
            out << (k ? "," : "") << columns[k];
        }
        out << "\n";
    }
    out << format_diagnostics_row(record) << "\n";
    if (!out) {
        throw std::runtime_error("failed writing '" + csv_path + "'");
    }
}

std::vector<DiagnosticsRecord> read_diagnostics(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw std::runtime_error("cannot open '" + csv_path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("'" + csv_path + "' is empty");
    }
    std::string expected;
    for (const auto& c : diagnostics_columns()) {
        expected += (expected.empty() ? "" : ",") + c;
    }
    if (line != expected) {
        throw FormatError("'" + csv_path + "': unexpected header");
    }
    std::vector<DiagnosticsRecord> out;
    int number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) {
            continue;
        }
        std::vector<double> v;
        std::size_t start = 0;
        while (start <= line.size()) {
            const auto comma = std::min(line.find(',', start), line.size());
            double x = 0.0;
            const auto res = std::from_chars(line.data() + start, line.data() + comma, x);
            if (res.ec != std::errc() || res.ptr != line.data() + comma) {
                throw FormatError("'" + csv_path + "' line " + std::to_string(number) + ": bad number");
            }
            v.push_back(x);
            start = comma + 1;
        }
        if (v.size() != diagnostics_columns().size()) {
            throw FormatError("'" + csv_path + "' line " + std::to_string(number) + ": wrong column count");
        }
        DiagnosticsRecord r;
        r.t = v[0];
        r.mass = v[1];
        r.kinetic = v[2];
        r.interaction = v[3];
        r.bulk = v[4];
        r.total_energy = v[5];
        r.grad_u_sq = v[6];
        r.grad_mu_sq = v[7];
        r.forcing_power = v[8];
        r.identity_residual = v[9];
        r.grad_control_margin = v[10];
        r.phi_min = v[11];
        r.phi_max = v[12];
        out.push_back(r);
    }
    return out;
}

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t bits = splitmix64(seed ^ splitmix64(index));
    return 2.0 * std::ldexp(static_cast<double>(bits >> 11), -53) - 1.0;
}

ScalarField initial_phi(const InitialSpec& spec, const Grid& grid) {
    const int n = grid.n();
    switch (spec.family) {
        case InitialFamily::uniform:
            return ScalarField::constant(grid, spec.value);
        case InitialFamily::random: {
            ScalarField xi(grid);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    xi(i, j) = counter_uniform(spec.seed, static_cast<std::uint64_t>(i) * n + j);
                }
            }
            const int max_mode = spec.max_mode >= 0 ? spec.max_mode : n / 4;
            SpectrumField hat = low_pass(transform(xi), max_mode);
            hat(0, 0) = 0.0;
            xi = inverse_transform(hat);
            const double peak = xi.values().abs().maxCoeff();
            if (peak > 0.0) {
                xi *= 1.0 / peak;
            }
            xi *= spec.amplitude;
            xi.values() += spec.mean;
            return xi;
        }
        case InitialFamily::tanh_strip: {
            const double l = grid.l();
            const double w = spec.width;
            return ScalarField::sample(grid, [&](double, double y) {
                return spec.mean + std::tanh((0.25 * l - std::abs(y - 0.5 * l)) / w);
            });
        }
        case InitialFamily::file: {
            Snapshot s = read_snapshot(spec.path);
            if (s.field.grid() != grid) {
                throw ConfigError("initial.path '" + spec.path + "' holds a field on a different grid");
            }
            return s.field;
        }
    }
    return ScalarField(grid);
}

VectorField initial_velocity(const InitialSpec& spec, const Grid& grid) {
    switch (spec.velocity) {
        case VelocityFamily::zero:
            return VectorField(grid);
        case VelocityFamily::taylor_green: {
            const double k = 2.0 * std::numbers::pi / grid.l();
            const double A = spec.velocity_amplitude;
            VectorField u(ScalarField::sample(grid, [&](double x, double y) { return A * std::sin(k * x) * std::cos(k * y); }),
                          ScalarField::sample(grid, [&](double x, double y) { return -A * std::cos(k * x) * std::sin(k * y); }));
            return u;
        }
        case VelocityFamily::file: {
            Snapshot sx = read_snapshot(spec.velocity_path_x);
            Snapshot sy = read_snapshot(spec.velocity_path_y);
            if (sx.field.grid() != grid || sy.field.grid() != grid) {
                throw ConfigError("u0 snapshot files hold fields on a different grid");
            }
            return leray_project(VectorField(std::move(sx.field), std::move(sy.field)));
        }
    }
    return VectorField(grid);
}

}  // namespace nlchns
