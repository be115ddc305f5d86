#include "lagflow/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>

#include "lagflow/error.hpp"
#include "lagflow/frechet.hpp"
#include "lagflow/reference_euler.hpp"
#include "lagflow/spectral.hpp"

namespace lagflow {

namespace fs = std::filesystem;

namespace {

std::string snapshot_name(const std::string& prefix, long index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06ld.%s", prefix.c_str(), index, ext);
  return buf;
}

double max_velocity_gradient(const VectorField& u) {
  double m = 0.0;
  for (int i = 0; i < u.dim(); ++i)
    for (int j = 0; j < u.dim(); ++j) m = std::max(m, partial(u[i], j).max_abs());
  return m;
}

struct Stored {
  double t;
  ScalarField rho;
  VectorField u;
};

class SnapshotSink {
 public:
  SnapshotSink(fs::path dir, std::string prefix, long stride, long steps, RunReport& report)
      : dir_(std::move(dir)), prefix_(std::move(prefix)), stride_(stride), steps_(steps),
        report_(report) {}

  // Writes the state if its step index falls on the stride or is final.
  bool offer(double t, const ScalarField& rho, const VectorField& u) {
    const long index = step_++;
    if (index % stride_ != 0 && index != steps_) return false;
    const Snapshot snap = make_snapshot(t, rho, u);
    const fs::path bin = dir_ / snapshot_name(prefix_, index, "lgf");
    write_snapshot(bin, snap);
    report_.files.push_back(bin);
    if (snap.dim == 1) {
      const fs::path csv = dir_ / snapshot_name(prefix_, index, "csv");
      write_snapshot_csv(csv, snap);
      report_.files.push_back(csv);
    }
    stored.push_back({t, rho, u});
    return true;
  }

  std::vector<Stored> stored;

 private:
  fs::path dir_;
  std::string prefix_;
  long stride_;
  long steps_;
  long step_ = 0;
  RunReport& report_;
};

void note_failure(RunReport& report, const std::string& solver, const Error& e, std::ostream* log) {
  report.success = false;
  const std::string msg = solver + ": " + e.what();
  report.message += (report.message.empty() ? "" : "\n") + msg;
  if (e.time() && (!report.failure_time || *e.time() < *report.failure_time))
    report.failure_time = e.time();
  if (log) *log << msg << '\n';
}

long step_count(double T, double dt) { return static_cast<long>(std::ceil(T / dt - 1e-9)); }

std::vector<Stored> run_lagrangian(const RunConfig& cfg, const InitialData& init,
                                   const PressureLaw& law, const fs::path& dir, RunReport& report,
                                   std::ostream* log) {
  const fs::path diag_path = dir / "diagnostics_lagrangian.csv";
  CsvWriter diag(diag_path, {"t", "mass", "rho_norm", "u_norm", "residual", "min_rho", "min_det",
                             "iterations"});
  report.files.push_back(diag_path);
  SnapshotSink sink(dir, "lagrangian", cfg.stride, step_count(cfg.T, cfg.dt), report);
  PicardConfig picard = cfg.picard;
  picard.dt = cfg.dt;
  try {
    solve(init.rho, init.u, law, cfg.T, picard,
          [&](const LagrangianState& s, const Diagnostics& d) {
            diag.row({d.t, d.mass, d.rho_norm, d.u_norm, d.residual, d.min_rho, d.min_det,
                      static_cast<double>(d.iterations)});
            if (sink.offer(s.t, s.rho, s.u) && log)
              *log << "lagrangian t=" << s.t << " mass=" << d.mass << " residual=" << d.residual
                   << " iterations=" << d.iterations << '\n';
          },
          false);
  } catch (const Error& e) {
    note_failure(report, "lagrangian", e, log);
  }
  return std::move(sink.stored);
}

std::vector<Stored> run_reference(const RunConfig& cfg, const InitialData& init,
                                  const PressureLaw& law, const fs::path& dir, RunReport& report,
                                  std::ostream* log) {
  const fs::path diag_path = dir / "diagnostics_reference.csv";
  CsvWriter diag(diag_path, {"t", "mass", "rho_norm", "u_norm", "min_rho", "max_grad_u"});
  report.files.push_back(diag_path);
  SnapshotSink sink(dir, "reference", cfg.stride, step_count(cfg.T, cfg.dt), report);
  const double beta = cfg.picard.beta_for(init.rho.grid());
  const double p = cfg.picard.p;
  ReferenceOptions opts;
  opts.blowup_threshold = cfg.picard.blowup_threshold;
  opts.resolution_threshold = cfg.picard.resolution_threshold;
  try {
    rk4_march(EulerState{0.0, init.rho, init.u}, law, cfg.T, cfg.dt,
              [&](const EulerState& s) {
                diag.row({s.t, s.rho.mean(), bessel_norm(s.rho, beta, p),
                          bessel_norm(s.u, beta, p), s.rho.min(), max_velocity_gradient(s.u)});
                if (sink.offer(s.t, s.rho, s.u) && log)
                  *log << "reference t=" << s.t << " mass=" << s.rho.mean() << '\n';
              },
              opts);
  } catch (const Error& e) {
    note_failure(report, "reference", e, log);
  }
  return std::move(sink.stored);
}

}  // namespace

fs::path resolve_out_dir(const std::optional<std::string>& flag, const RunConfig& cfg) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return cfg.out_dir;
}

ComparisonRow compare_fields(double t, const ScalarField& rho_a, const VectorField& u_a,
                             const ScalarField& rho_b, const VectorField& u_b, double beta,
                             double p) {
  return ComparisonRow{t, relative_l2(rho_a, rho_b), relative_l2(u_a, u_b),
                       bessel_norm(rho_a - rho_b, beta, p), bessel_norm(u_a - u_b, beta, p)};
}

ComparisonRow compare_snapshots(const Snapshot& a, const Snapshot& b, double beta, double p) {
  if (a.dim != b.dim || a.n != b.n) fail(ErrorKind::InvalidArgument, "snapshots live on different grids");
  if (std::abs(a.t - b.t) > 1e-9 * std::max(1.0, std::abs(a.t)))
    fail(ErrorKind::InvalidArgument, "snapshots are at different times");
  return compare_fields(a.t, snapshot_field(a, "rho"), snapshot_velocity(a),
                        snapshot_field(b, "rho"), snapshot_velocity(b), beta, p);
}

RunReport run(const RunConfig& cfg, const fs::path& out_dir, std::ostream* log) {
  RunReport report;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory " + out_dir.string() + ": " + ec.message());

  const PressureLaw law = make_law(cfg.law);
  const InitialData init = make_initial(cfg);
  if (log) *log << "grid d=" << cfg.dim << " n=" << cfg.n << ", law " << law.describe()
                << ", data '" << init.name << "', solver " << to_string(cfg.solver) << '\n';

  std::vector<Stored> lag, ref;
  if (cfg.solver != SolverChoice::Reference) lag = run_lagrangian(cfg, init, law, out_dir, report, log);
  if (cfg.solver != SolverChoice::Lagrangian) ref = run_reference(cfg, init, law, out_dir, report, log);

  if (cfg.solver == SolverChoice::Both) {
    const fs::path path = out_dir / "comparison.csv";
    CsvWriter csv(path, {"t", "rel_l2_rho", "rel_l2_u", "hbeta_rho", "hbeta_u"});
    report.files.push_back(path);
    const double beta = cfg.picard.beta_for(init.rho.grid());
    const std::size_t count = std::min(lag.size(), ref.size());
    for (std::size_t i = 0; i < count; ++i) {
      const ComparisonRow r =
          compare_fields(lag[i].t, lag[i].rho, lag[i].u, ref[i].rho, ref[i].u, beta, cfg.picard.p);
      csv.row({r.t, r.rel_l2_rho, r.rel_l2_u, r.hbeta_rho, r.hbeta_u});
    }
  }
  if (report.success) report.message = "completed at t=" + std::to_string(cfg.T);
  return report;
}

double loglog_slope(const std::vector<double>& deltas, const std::vector<double>& errors) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < deltas.size() && i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !(deltas[i] > 0.0)) continue;
    const double x = std::log(deltas[i]);
    const double y = std::log(errors[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y, ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<FrechetRow> report_frechet(const RunConfig& cfg,
                                       const std::optional<fs::path>& csv_path) {
  const auto& fc = cfg.frechet;
  if (fc.u0.empty() || fc.w.empty() || fc.t.empty() || fc.deltas.empty())
    fail(ErrorKind::InvalidArgument, "no cases");
  const TorusGrid g = cfg.grid();
  const Interpolation method = cfg.picard.interpolation;
  auto field = [&](const std::string& modes) {
    VectorField f(g);
    f[0] = synthesize(g, 0.0, parse_modes(modes));
    return f;
  };

  std::vector<FrechetRow> rows;
  for (const auto& u0s : fc.u0) {
    const VectorField u0 = field(u0s);
    for (const auto& ws : fc.w) {
      const VectorField w = field(ws);
      for (double t : fc.t) {
        const VectorField dx = flow_frechet_at_zero(u0, w, t, fc.dt, method);
        const VectorField da = labels_frechet_at_zero(u0, w, t, fc.dt, method);
        FrechetRow flow{u0s, ws, t, "flow", fc.deltas, {}, {}, 0.0};
        FrechetRow labels{u0s, ws, t, "labels", fc.deltas, {}, {}, 0.0};
        for (double delta : fc.deltas) {
          const VectorField fx = map_difference(steady_flow(u0 + delta * w, t, fc.dt, method),
                                                steady_flow(u0 - delta * w, t, fc.dt, method));
          const VectorField fa = map_difference(steady_labels(u0 + delta * w, t, fc.dt, method),
                                                steady_labels(u0 - delta * w, t, fc.dt, method));
          const RelativeError ex = relative_error(dx, (1.0 / (2.0 * delta)) * fx);
          const RelativeError ea = relative_error(da, (1.0 / (2.0 * delta)) * fa);
          flow.rel_l2.push_back(ex.l2);
          flow.rel_max.push_back(ex.max);
          labels.rel_l2.push_back(ea.l2);
          labels.rel_max.push_back(ea.max);
        }
        flow.slope = loglog_slope(flow.deltas, flow.rel_l2);
        labels.slope = loglog_slope(labels.deltas, labels.rel_l2);
        rows.push_back(std::move(flow));
        rows.push_back(std::move(labels));
      }
    }
  }

  if (csv_path) {
    std::FILE* f = std::fopen(csv_path->c_str(), "w");
    if (!f) fail(ErrorKind::Io, "cannot write " + csv_path->string());
    std::fprintf(f, "u0,w,t,map,delta,rel_l2,rel_max,slope\n");
    for (const auto& r : rows)
      std::fprintf(f, "\"%s\",\"%s\",%.17g,%s,%.17g,%.17g,%.17g,%.17g\n", r.u0.c_str(),
                   r.w.c_str(), r.t, r.map.c_str(), r.deltas.back(), r.rel_l2.back(),
                   r.rel_max.back(), r.slope);
    std::fclose(f);
  }
  return rows;
}

}  // namespace lagflow
