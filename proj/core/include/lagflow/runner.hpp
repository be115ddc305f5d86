#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lagflow/config.hpp"
#include "lagflow/io.hpp"

namespace lagflow {

inline constexpr const char* kOutDirEnv = "LAGFLOW_OUT_DIR";

/// Output directory: explicit flag, then $LAGFLOW_OUT_DIR, then the config.
std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag,
                                      const RunConfig& cfg);

struct RunReport {
  bool success = true;
  std::string message;
  std::optional<double> failure_time;
  std::vector<std::filesystem::path> files;
};

/// Solves with the configured solver(s), writing snapshots every `stride`
/// steps and at the final time, per-solver diagnostics CSVs and, when both
/// solvers run, comparison.csv. Solver failures are reported, not thrown;
/// nothing non-finite is ever written. `log` receives progress lines.
RunReport run(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream* log);

struct ComparisonRow {
  double t = 0.0;
  double rel_l2_rho = 0.0;
  double rel_l2_u = 0.0;
  double hbeta_rho = 0.0;  // H^beta_p norm of the difference
  double hbeta_u = 0.0;
};

ComparisonRow compare_fields(double t, const ScalarField& rho_a, const VectorField& u_a,
                             const ScalarField& rho_b, const VectorField& u_b, double beta,
                             double p);
ComparisonRow compare_snapshots(const Snapshot& a, const Snapshot& b, double beta, double p);

struct FrechetRow {
  std::string u0;
  std::string w;
  double t = 0.0;
  std::string map;  // "flow" or "labels"
  std::vector<double> deltas;
  std::vector<double> rel_l2;   // per delta
  std::vector<double> rel_max;  // per delta
  double slope = 0.0;           // log-log slope of rel_l2 against delta
};

/// Least-squares slope of log(err) against log(delta); NaN when fewer than
/// two positive errors exist.
double loglog_slope(const std::vector<double>& deltas, const std::vector<double>& errors);

/// Runs the configured battery (every u0 x w x t case, both maps) and, when
/// `csv` is set, writes one row per case with the errors at the last delta.
/// Throws InvalidArgument "no cases" when the battery is empty.
std::vector<FrechetRow> report_frechet(const RunConfig& cfg,
                                       const std::optional<std::filesystem::path>& csv);

}  // namespace lagflow
