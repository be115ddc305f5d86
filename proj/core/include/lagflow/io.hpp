#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "lagflow/field.hpp"

namespace lagflow {

/// Named nodal fields at one time.
///
/// Binary layout (little-endian): magic "LGFD", u32 version, u32 d, u32 n,
/// f64 t, u32 field count, then one 16-byte NUL-padded name per field, then
/// each field's n^d values as f64 in row-major node order.
struct Snapshot {
  int dim = 1;
  int n = 0;
  double t = 0.0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotNameBytes = 16;

/// rho, u1[, u2].
Snapshot make_snapshot(double t, const ScalarField& rho, const VectorField& u);

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
/// Throws Io on a bad magic, unsupported version or truncated file.
Snapshot read_snapshot(const std::filesystem::path& path);

/// d = 1 only: columns x followed by every field.
void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snap);

ScalarField snapshot_field(const Snapshot& snap, const std::string& name);
VectorField snapshot_velocity(const Snapshot& snap);

/// Minimal CSV writer with full double precision.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);

 private:
  std::FILE* file_;
  std::size_t columns_;
};

}  // namespace lagflow
