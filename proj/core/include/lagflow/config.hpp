#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lagflow/initial_data.hpp"
#include "lagflow/lagrangian.hpp"
#include "lagflow/thermo.hpp"

namespace lagflow {

struct LawConfig {
  std::string name = "gamma";
  double kappa = 1.0;
  double gamma = 1.4;
  std::vector<double> table_rho;
  std::vector<double> table_p;
  double rho_min = kDefaultRhoMin;
};

struct FieldSpec {
  double mean = 0.0;
  std::vector<ModeTerm> terms;
};

struct InitialConfig {
  std::string preset = "smooth";
  std::optional<FieldSpec> rho;
  std::optional<FieldSpec> u1;
  std::optional<FieldSpec> u2;
};

enum class SolverChoice { Lagrangian, Reference, Both };

struct FrechetConfig {
  std::vector<std::string> u0;  // mode lists for the first velocity component
  std::vector<std::string> w;
  std::vector<double> t;
  std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  double dt = 1e-3;
};

struct RunConfig {
  int dim = 1;
  int n = 128;
  LawConfig law;
  InitialConfig initial;
  SolverChoice solver = SolverChoice::Lagrangian;
  double T = 0.1;
  double dt = 1e-3;
  PicardConfig picard;
  std::string out_dir = "lagflow-out";
  int stride = 10;
  FrechetConfig frechet;

  TorusGrid grid() const { return TorusGrid::make(dim, n); }
};

SolverChoice parse_solver(std::string_view name);
std::string_view to_string(SolverChoice s);

/// INI text with sections grid, law, initial, solver, picard, output and
/// frechet. Throws Parse on malformed input and Validation listing every
/// violated constraint.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Constraint violations of a config, one message per entry.
std::vector<std::string> validation_errors(const RunConfig& cfg);

PressureLaw make_law(const LawConfig& law);
std::vector<std::string> law_names();

/// Initial data of the config (preset overridden by explicit mode lists),
/// projected onto the dealiased band.
InitialData make_initial(const RunConfig& cfg);

}  // namespace lagflow
