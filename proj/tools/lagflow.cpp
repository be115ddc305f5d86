#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lagflow/config.hpp"
#include "lagflow/error.hpp"
#include "lagflow/io.hpp"
#include "lagflow/runner.hpp"

namespace {

constexpr int kExitSolverFailure = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> solver;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
  auto* opt = cmd->add_option("--config", c.config, "INI configuration file");
  if (config_required) opt->required();
  cmd->add_option("--out", c.out, "output directory (overrides $LAGFLOW_OUT_DIR and the config)");
  cmd->add_flag("--quiet", c.quiet, "suppress progress output");
}

lagflow::RunConfig load(const Common& c) {
  lagflow::RunConfig cfg = lagflow::load_config(c.config);
  if (c.solver) cfg.solver = lagflow::parse_solver(*c.solver);
  return cfg;
}

int do_run(const Common& c) {
  const lagflow::RunConfig cfg = load(c);
  const auto dir = lagflow::resolve_out_dir(c.out, cfg);
  const auto report = lagflow::run(cfg, dir, c.quiet ? nullptr : &std::cout);
  if (!report.success) {
    std::cerr << "error: " << report.message << '\n';
    return kExitSolverFailure;
  }
  if (!c.quiet) std::cout << report.message << "; output in " << dir.string() << '\n';
  return 0;
}

int do_frechet(const Common& c) {
  const lagflow::RunConfig cfg = load(c);
  const auto dir = lagflow::resolve_out_dir(c.out, cfg);
  std::filesystem::create_directories(dir);
  const auto path = dir / "frechet.csv";
  const auto rows = lagflow::report_frechet(cfg, path);
  if (!c.quiet) {
    std::printf("%-24s %-12s %6s %-7s %12s %12s %8s\n", "u0", "w", "t", "map", "rel_l2",
                "rel_max", "slope");
    for (const auto& r : rows)
      std::printf("%-24s %-12s %6.3g %-7s %12.4e %12.4e %8.3f\n", r.u0.c_str(), r.w.c_str(), r.t,
                  r.map.c_str(), r.rel_l2.back(), r.rel_max.back(), r.slope);
    std::printf("report written to %s\n", path.c_str());
  }
  return 0;
}

int do_compare(const Common& c, const std::vector<std::string>& files, double beta, double p) {
  if (!files.empty()) {
    if (files.size() != 2) throw CLI::ValidationError("compare", "expects exactly two snapshot files");
    const auto a = lagflow::read_snapshot(files[0]);
    const auto b = lagflow::read_snapshot(files[1]);
    const double b_eff = beta > 0.0 ? beta : a.dim / p + 1.5;
    const auto r = lagflow::compare_snapshots(a, b, b_eff, p);
    std::printf("t,rel_l2_rho,rel_l2_u,hbeta_rho,hbeta_u\n%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                r.rel_l2_rho, r.rel_l2_u, r.hbeta_rho, r.hbeta_u);
    return 0;
  }
  if (c.config.empty()) throw CLI::ValidationError("compare", "needs --config or two snapshot files");
  Common both = c;
  both.solver = "both";
  return do_run(both);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressible isentropic Euler solver on the torus (Lagrangian and reference)"};
  app.require_subcommand(1);

  Common run_args, frechet_args, compare_args;
  auto* run_cmd = app.add_subcommand("run", "solve and write snapshots and diagnostics");
  add_common(run_cmd, run_args, true);
  run_cmd->add_option("--solver", run_args.solver, "lagrangian, reference or both");

  auto* frechet_cmd = app.add_subcommand("frechet", "run the derivative battery of [frechet]");
  add_common(frechet_cmd, frechet_args, true);

  auto* compare_cmd =
      app.add_subcommand("compare", "run both solvers, or compare two snapshot files");
  add_common(compare_cmd, compare_args, false);
  std::vector<std::string> files;
  double beta = 0.0;
  double p = 2.0;
  compare_cmd->add_option("files", files, "two snapshot files");
  compare_cmd->add_option("--beta", beta, "Bessel index (default d/p + 1.5)");
  compare_cmd->add_option("--p", p, "Lebesgue index")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run_cmd) return do_run(run_args);
    if (*frechet_cmd) return do_frechet(frechet_args);
    return do_compare(compare_args, files, beta, p);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const lagflow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool usage = e.kind() == lagflow::ErrorKind::Parse ||
                       e.kind() == lagflow::ErrorKind::Validation ||
                       e.kind() == lagflow::ErrorKind::Io ||
                       e.kind() == lagflow::ErrorKind::InvalidArgument;
    return usage ? kExitUsage : kExitSolverFailure;
  }
}
