#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlchns/config.hpp"
#include "nlchns/diagnostics.hpp"

namespace nlchns {

/// Malformed snapshot or diagnostics file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Snapshot {
    std::string name;
    double t = 0.0;
    ScalarField field;
};

/// Header line `NLCHNS1 <name> <n> <l> <t> <count> LE` followed by count little-endian doubles.
void write_snapshot(const ScalarField& field, const std::string& name, double t, const std::string& path);
Snapshot read_snapshot(const std::string& path);

/// The fixed column order of the diagnostics CSV.
const std::vector<std::string>& diagnostics_columns();
/// Appends one row, writing the header first when the file is new or empty.
void append_diagnostics(const DiagnosticsRecord& record, const std::string& csv_path);
std::string format_diagnostics_row(const DiagnosticsRecord& record);
std::vector<DiagnosticsRecord> read_diagnostics(const std::string& csv_path);

/// Uniform deviate in [-1, 1) from a counter-based hash of (seed, index); independent of call order.
double counter_uniform(std::uint64_t seed, std::uint64_t index);

ScalarField initial_phi(const InitialSpec& spec, const Grid& grid);
/// Divergence-free initial velocity (file data is Leray-projected).
VectorField initial_velocity(const InitialSpec& spec, const Grid& grid);

}  // namespace nlchns
