#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nematicflow/audit.hpp"
#include "nematicflow/dynamics.hpp"

namespace nematicflow {

// Binary checkpoint layout (all integers u32, all reals f64, little-endian):
//   "NEMF" version ndim {cells spacing bc} x3 t  u[ndim] d[3] theta p
// Each array holds grid.size() values with x fastest.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const State& state, std::ostream& out);
void save_checkpoint(const State& state, const std::filesystem::path& path);
// Throws IoError on truncated or malformed input.
State load_checkpoint(std::istream& in);
State load_checkpoint(const std::filesystem::path& path);

// Legacy ASCII structured-points file. Points sit at cell centres; u is
// averaged from faces to cells and padded to three components.
struct Snapshot {
  std::array<int, 3> dims{1, 1, 1};
  std::array<double, 3> origin{};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  double t = 0.0;
  std::vector<double> u;  // 3 per point
  std::vector<double> d;  // 3 per point
  std::vector<double> theta;
  std::vector<double> p;

  bool operator==(const Snapshot&) const = default;
};

Snapshot make_snapshot(const State& state);
void write_snapshot(const Snapshot& snap, std::ostream& out);
void write_snapshot(const State& state, std::ostream& out);
void write_snapshot(const State& state, const std::filesystem::path& path);
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

inline constexpr int kAuditCsvVersion = 1;
const std::vector<std::string>& audit_csv_columns();
// Version comment line followed by the column header.
void write_audit_header(std::ostream& out);
void write_audit_row(const AuditReport& report, std::ostream& out);

}  // namespace nematicflow
