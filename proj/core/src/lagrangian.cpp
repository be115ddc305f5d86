#include "lagflow/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lagflow/error.hpp"
#include "lagflow/spectral.hpp"

namespace lagflow {

namespace {

// One backward RK4 step: the map x -> position at t_prev of the
// characteristic through x at t_next.
FlowMap one_step_back(const VectorField& u_prev, double t_prev, const VectorField& u_next,
                      double t_next, Interpolation method) {
  const VelocityHistory pair({t_prev, t_next}, {u_prev, u_next});
  return trace_characteristics(pair, t_next, t_prev, t_next - t_prev, {method, 0.0});
}

// Evaluates all `fields` at the images of `m`.
std::vector<ScalarField> compose_all(std::vector<ScalarField> fields, const FlowMap& m,
                                     Interpolation method) {
  const std::size_t count = fields.size();
  if (m.is_identity()) return fields;
  const PeriodicInterpolant interp(fields, method);
  std::vector<double> buf(count);
  for (std::size_t i = 0; i < m.grid().size(); ++i) {
    interp.eval(m.image(i), buf);
    for (std::size_t f = 0; f < count; ++f) fields[f][i] = buf[f];
  }
  return fields;
}

ScalarField kinetic_density(const VectorField& u) {
  ScalarField k = dealias(squared_magnitude(u));
  k *= 0.5;
  return k;
}

double max_velocity_gradient(const VectorField& u) {
  double m = 0.0;
  for (int i = 0; i < u.dim(); ++i)
    for (int j = 0; j < u.dim(); ++j) m = std::max(m, partial(u[i], j).max_abs());
  return m;
}

VelocityHistory truncated_history(const VelocityHistory& u, double t) {
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  if (std::abs(u.start()) > tol) {
    std::ostringstream os;
    os << "velocity history must start at t=0, starts at " << u.start();
    fail(ErrorKind::HistoryGap, os.str());
  }
  if (!u.covers(0.0, t)) {
    std::ostringstream os;
    os << "velocity history [" << u.start() << ", " << u.end() << "] does not cover t=" << t;
    fail(ErrorKind::HistoryGap, os.str());
  }
  std::vector<double> times;
  std::vector<VectorField> fields;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u.times()[j] > t - tol) break;
    times.push_back(u.times()[j]);
    fields.push_back(u.fields()[j]);
  }
  if (times.empty() || std::abs(times.back() - t) > tol) {
    times.push_back(t);
    fields.push_back(u.at(t));
  } else {
    times.back() = t;
  }
  return VelocityHistory(std::move(times), std::move(fields));
}

}  // namespace

double PicardConfig::epsilon_for(const TorusGrid& grid) const {
  if (epsilon) return *epsilon;
  const double h = 2.0 * std::numbers::pi / grid.n();
  return 0.25 * h * h;
}

double PicardConfig::beta_for(const TorusGrid& grid) const {
  if (beta) return *beta;
  return grid.dim() / p + 1.5;
}

void PicardConfig::validate(const TorusGrid& grid) const {
  std::vector<std::string> problems;
  if (!(dt > 0.0)) problems.push_back("picard.dt must be positive");
  if (!(picard_tol > 0.0)) problems.push_back("picard.tol must be positive");
  if (max_iters < 1) problems.push_back("picard.max_iters must be at least 1");
  if (epsilon && !(*epsilon >= 0.0)) problems.push_back("picard.epsilon must be >= 0");
  if (!(damping > 0.0 && damping <= 1.0)) problems.push_back("picard.damping must lie in (0, 1]");
  if (!(p > 1.0)) problems.push_back("picard.p must exceed 1");
  if (!(fold_floor >= 0.0)) problems.push_back("picard.fold_floor must be >= 0");
  if (!(blowup_threshold > 0.0)) problems.push_back("picard.blowup_threshold must be positive");
  if (!(resolution_threshold > 0.0)) problems.push_back("picard.resolution_threshold must be positive");
  if (enforce_norm_hypothesis && !(beta_for(grid) > grid.dim() / p + 1.0))
    problems.push_back("picard.beta must exceed d/p + 1");
  if (problems.empty()) return;
  std::string msg = "invalid Picard configuration:";
  for (const auto& s : problems) msg += "\n  - " + s;
  fail(ErrorKind::Validation, msg);
}

VectorField virtual_velocity(const VectorField& u0, const FlowMap& A, Interpolation method) {
  return compose(u0, A, method);
}

ScalarField density_from_labels(const ScalarField& rho0, const FlowMap& A, Interpolation method,
                                double fold_floor) {
  require_same_grid(rho0.grid(), A.grid(), "density_from_labels");
  if (A.is_identity()) return rho0;
  return dealiased_product(jacobian(A, fold_floor), compose(rho0, A, method));
}

VectorField reconstruct_velocity(const VectorField& u0, const FlowMap& A, const ScalarField& q,
                                 Interpolation method) {
  require_same_grid(u0.grid(), A.grid(), "reconstruct_velocity");
  require_same_grid(u0.grid(), q.grid(), "reconstruct_velocity");
  VectorField u = A.is_identity() ? u0 : dealias(pushforward_covector(A, compose(u0, A, method)));
  if (q.max_abs() != 0.0) u -= gradient(q);
  return u;
}

ScalarField accumulate_q(const VelocityHistory& flows, const std::vector<ScalarField>& integrand,
                         double t, Interpolation method) {
  require(integrand.size() == flows.size(), "accumulate_q: one integrand sample per history time");
  const auto& ts = flows.times();
  if (std::abs(ts.front()) > 1e-14) fail(ErrorKind::HistoryGap, "accumulate_q: history must start at 0");
  const auto it = std::find_if(ts.begin(), ts.end(),
                               [t](double s) { return std::abs(s - t) <= 1e-12 * std::max(1.0, std::abs(t)); });
  if (it == ts.end()) {
    std::ostringstream os;
    os << "accumulate_q: t=" << t << " is not a stored history time";
    fail(ErrorKind::HistoryGap, os.str());
  }
  const auto last = static_cast<std::size_t>(it - ts.begin());
  ScalarField q(flows.grid());
  for (std::size_t j = 0; j < last; ++j) {
    const double dt = ts[j + 1] - ts[j];
    const FlowMap back = one_step_back(flows.fields()[j], ts[j], flows.fields()[j + 1], ts[j + 1], method);
    auto carried = compose_all({q, integrand[j]}, back, method);
    q = carried[0];
    for (std::size_t i = 0; i < q.size(); ++i)
      q[i] += 0.5 * dt * (integrand[j + 1][i] + carried[1][i]);
  }
  return q;
}

LabelTransport initial_transport(const ScalarField& rho0, const VectorField& u0,
                                 const PressureLaw& law) {
  require_same_grid(rho0.grid(), u0.grid(), "initial_transport");
  const auto& g = rho0.grid();
  return LabelTransport{0.0,
                        FlowMap::identity(g),
                        rho0,
                        ScalarField(g),
                        ScalarField(g),
                        enthalpy_field(law, rho0),
                        kinetic_density(u0),
                        u0};
}

LabelTransport advance_transport(const LabelTransport& prev, const VectorField& flow_velocity,
                                 double t_next, const ScalarField& rho0, const PressureLaw& law,
                                 const TransportOptions& options) {
  const double dt = t_next - prev.t;
  require(dt > 0.0, "advance_transport: t_next must follow the previous time");
  const FlowMap back =
      one_step_back(prev.flow_velocity, prev.t, flow_velocity, t_next, options.interpolation);

  std::vector<ScalarField> fields;
  const auto& disp = prev.labels.displacement();
  for (int c = 0; c < disp.dim(); ++c) fields.push_back(disp[c]);
  fields.push_back(prev.q_h);
  fields.push_back(prev.q_k);
  fields.push_back(prev.h_field);
  fields.push_back(prev.k_field);
  const auto carried = compose_all(std::move(fields), back, options.interpolation);

  const int d = disp.dim();
  VectorField label_disp = back.displacement();
  for (int c = 0; c < d; ++c) label_disp[c] += carried[c];
  FlowMap labels(std::move(label_disp), t_next);

  ScalarField rho = density_from_labels(rho0, labels, options.interpolation, options.fold_floor);
  ScalarField h_field = enthalpy_field(law, rho);
  ScalarField k_field = kinetic_density(flow_velocity);

  ScalarField q_h = carried[d];
  ScalarField q_k = carried[d + 1];
  const ScalarField& h_back = carried[d + 2];
  const ScalarField& k_back = carried[d + 3];
  for (std::size_t i = 0; i < q_h.size(); ++i) {
    q_h[i] += 0.5 * dt * (h_field[i] + h_back[i]);
    q_k[i] += 0.5 * dt * (k_field[i] + k_back[i]);
  }
  return LabelTransport{t_next,           std::move(labels),  std::move(rho),
                        std::move(q_h),   std::move(q_k),     std::move(h_field),
                        std::move(k_field), flow_velocity};
}

VectorField reconstruct_from_transport(const VectorField& u0, const LabelTransport& transport,
                                       Interpolation method) {
  return reconstruct_velocity(u0, transport.labels, transport.q_h - transport.q_k, method);
}

VectorField regularize(const VectorField& u, const VectorField& u0, double eps) {
  if (eps == 0.0) return u;
  return u0 + heat_smooth(u - u0, eps);
}

VectorField residual_F(double t, const VelocityHistory& u_hist, const ScalarField& rho0,
                       const VectorField& u0, const PressureLaw& law,
                       const TransportOptions& options) {
  const VelocityHistory h = truncated_history(u_hist, t);
  LabelTransport tr = initial_transport(rho0, h.fields().front(), law);
  for (std::size_t j = 1; j < h.size(); ++j)
    tr = advance_transport(tr, h.fields()[j], h.times()[j], rho0, law, options);
  return h.fields().back() - reconstruct_from_transport(u0, tr, options.interpolation);
}

VectorField regularized_residual(double t, const VelocityHistory& u_hist,
                                 const ScalarField& rho0, const VectorField& u0,
                                 const PressureLaw& law, double eps,
                                 const TransportOptions& options) {
  if (!(eps >= 0.0)) fail(ErrorKind::InvalidArgument, "regularized_residual: epsilon must be >= 0");
  std::vector<VectorField> fields;
  fields.reserve(u_hist.size());
  for (const auto& f : u_hist.fields()) fields.push_back(regularize(f, u0, eps));
  return residual_F(t, VelocityHistory(u_hist.times(), std::move(fields)), rho0, u0, law,
                    options);
}

LagrangianState initial_state(const ScalarField& rho0, const VectorField& u0,
                              const PressureLaw& law) {
  LabelTransport tr = initial_transport(rho0, u0, law);
  const auto& g = rho0.grid();
  return LagrangianState{0.0, u0, rho0, ScalarField(g), tr.labels, u0, std::move(tr), VectorField(g)};
}

namespace {

LagrangianState assemble(const LabelTransport& tr, VectorField u, VectorField increment,
                         const VectorField& u0, Interpolation method) {
  LagrangianState s{tr.t,
                    std::move(u),
                    tr.rho,
                    tr.q_h - tr.q_k,
                    tr.labels,
                    virtual_velocity(u0, tr.labels, method),
                    tr,
                    std::move(increment)};
  return s;
}

}  // namespace

StepResult picard_step(const LagrangianState& state, const PicardConfig& cfg,
                       const ScalarField& rho0, const VectorField& u0, const PressureLaw& law) {
  const auto& grid = state.u.grid();
  const double t_next = state.t + cfg.dt;
  const double eps = cfg.epsilon_for(grid);
  const double beta = cfg.beta_for(grid);
  const TransportOptions topts{cfg.interpolation, cfg.fold_floor};
  try {
    VectorField u = state.u + state.last_increment;  // linear extrapolation
    StepReport report;
    double theta = cfg.damping;
    double previous = std::numeric_limits<double>::infinity();
    // Regularized sweeps first, then plain sweeps until residual_F itself is small.
    bool polishing = eps == 0.0;
    bool converged = false;
    for (int k = 1; k <= cfg.max_iters; ++k) {
      const VectorField flow = polishing ? u : regularize(u, u0, eps);
      // Smoothing is a no-op when the deviation from u0 vanishes; no polish needed then.
      const bool exact = polishing || (flow - u).max_abs() == 0.0;
      const LabelTransport tr = advance_transport(state.transport, flow, t_next, rho0, law, topts);
      const VectorField rhs = reconstruct_from_transport(u0, tr, cfg.interpolation);
      VectorField next = (1.0 - theta) * u + theta * rhs;
      const double inc = bessel_norm(next - u, beta, cfg.p);
      if (!std::isfinite(inc)) fail(ErrorKind::Blowup, "non-finite Picard iterate");
      report.increments.push_back(inc);
      report.iterations = k;
      u = std::move(next);
      if (inc <= cfg.picard_tol) {
        if (exact) {
          converged = true;
          break;
        }
        polishing = true;
        previous = std::numeric_limits<double>::infinity();
        continue;
      }
      if (inc > previous) theta = std::max(0.5 * theta, 1.0 / 64.0);
      previous = inc;
    }
    if (!converged) {
      std::ostringstream os;
      os << "Picard iteration did not converge in " << cfg.max_iters
         << " iterations (last increment " << report.increments.back() << ", tol "
         << cfg.picard_tol << ")";
      fail(ErrorKind::NoConvergence, os.str());
    }
    report.damping = theta;

    // Rebuild every Lagrangian quantity from the converged velocity.
    const LabelTransport tr = advance_transport(state.transport, u, t_next, rho0, law, topts);
    const VectorField rhs = reconstruct_from_transport(u0, tr, cfg.interpolation);
    report.residual_norm = bessel_norm(u - rhs, beta, cfg.p);
    report.min_det = determinant(grad_map(tr.labels)).min();
    VectorField increment = u - state.u;
    return {assemble(tr, std::move(u), std::move(increment), u0, cfg.interpolation), report};
  } catch (const Error& e) {
    throw e.at_time(t_next);
  }
}

Diagnostics diagnose(const LagrangianState& state, const StepReport& report,
                     const PicardConfig& cfg) {
  const auto& g = state.u.grid();
  const double beta = cfg.beta_for(g);
  return Diagnostics{state.t,
                     state.rho.mean(),
                     bessel_norm(state.rho, beta, cfg.p),
                     bessel_norm(state.u, beta, cfg.p),
                     report.residual_norm,
                     state.rho.min(),
                     report.min_det,
                     report.iterations};
}

namespace {

long step_count(double T, double dt) { return static_cast<long>(std::ceil(T / dt - 1e-9)); }

void check_blowup(const LagrangianState& s, const PicardConfig& cfg) {
  if (!s.u.all_finite() || !s.rho.all_finite())
    throw Error(ErrorKind::Blowup, "non-finite state", s.t);
  const double scale = max_velocity_gradient(s.u) * cfg.dt;
  if (scale > cfg.blowup_threshold) {
    std::ostringstream os;
    os << "approaching blowup: max|grad u|*dt = " << scale << " > " << cfg.blowup_threshold;
    throw Error(ErrorKind::Blowup, os.str(), s.t);
  }
  const double tail = resolution_indicator(s.u);
  if (tail > cfg.resolution_threshold) {
    std::ostringstream os;
    os << "approaching blowup: gradients reached the grid scale (resolution indicator " << tail
       << " > " << cfg.resolution_threshold << ")";
    throw Error(ErrorKind::Blowup, os.str(), s.t);
  }
}

SolveResult solve_stepwise(const ScalarField& rho0, const VectorField& u0, const PressureLaw& law,
                           double T, const PicardConfig& cfg, const LagrangianObserver& observer,
                           bool keep_states) {
  SolveResult result;
  LagrangianState s = initial_state(rho0, u0, law);
  StepReport first;
  auto record = [&](const LagrangianState& st, const StepReport& rep) {
    const Diagnostics d = diagnose(st, rep, cfg);
    if (observer) observer(st, d);
    result.diagnostics.push_back(d);
    result.reports.push_back(rep);
    if (keep_states) result.states.push_back(st);
  };
  record(s, first);
  const long steps = step_count(T, cfg.dt);
  for (long n = 0; n < steps; ++n) {
    PicardConfig step_cfg = cfg;
    if (n + 1 == steps) step_cfg.dt = T - s.t;
    StepResult r = picard_step(s, step_cfg, rho0, u0, law);
    check_blowup(r.state, cfg);
    s = std::move(r.state);
    record(s, r.report);
  }
  return result;
}

SolveResult solve_global(const ScalarField& rho0, const VectorField& u0, const PressureLaw& law,
                         double T, const PicardConfig& cfg, const LagrangianObserver& observer,
                         bool keep_states) {
  const auto& grid = u0.grid();
  const double eps = cfg.epsilon_for(grid);
  const double beta = cfg.beta_for(grid);
  const TransportOptions topts{cfg.interpolation, cfg.fold_floor};
  const long steps = step_count(T, cfg.dt);
  std::vector<double> times{0.0};
  for (long n = 1; n <= steps; ++n) times.push_back(n == steps ? T : n * cfg.dt);
  std::vector<VectorField> u(times.size(), u0);

  double theta = cfg.damping;
  double previous = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool polishing = eps == 0.0;
  bool converged = false;
  for (int k = 1; k <= cfg.max_iters && !converged; ++k) {
    iterations = k;
    LabelTransport tr = initial_transport(rho0, u[0], law);
    double inc = 0.0;
    std::vector<VectorField> next = u;
    for (std::size_t j = 1; j < times.size(); ++j) {
      try {
        tr = advance_transport(tr, polishing ? u[j] : regularize(u[j], u0, eps), times[j], rho0,
                               law, topts);
      } catch (const Error& e) {
        throw e.at_time(times[j]);
      }
      const VectorField rhs = reconstruct_from_transport(u0, tr, cfg.interpolation);
      next[j] = (1.0 - theta) * u[j] + theta * rhs;
      inc = std::max(inc, bessel_norm(next[j] - u[j], beta, cfg.p));
    }
    if (!std::isfinite(inc)) throw Error(ErrorKind::Blowup, "non-finite global Picard iterate", T);
    u = std::move(next);
    if (inc <= cfg.picard_tol && !polishing) {
      polishing = true;
      previous = std::numeric_limits<double>::infinity();
      continue;
    }
    converged = inc <= cfg.picard_tol;
    if (inc > previous) theta = std::max(0.5 * theta, 1.0 / 64.0);
    previous = inc;
  }
  if (!converged) {
    std::ostringstream os;
    os << "global Picard iteration did not converge in " << cfg.max_iters << " iterations";
    throw Error(ErrorKind::NoConvergence, os.str(), T);
  }

  SolveResult result;
  LabelTransport tr = initial_transport(rho0, u[0], law);
  LagrangianState s = initial_state(rho0, u0, law);
  auto record = [&](const LagrangianState& st, const StepReport& rep) {
    const Diagnostics d = diagnose(st, rep, cfg);
    if (observer) observer(st, d);
    result.diagnostics.push_back(d);
    result.reports.push_back(rep);
    if (keep_states) result.states.push_back(st);
  };
  record(s, StepReport{});
  for (std::size_t j = 1; j < times.size(); ++j) {
    tr = advance_transport(tr, u[j], times[j], rho0, law, topts);
    StepReport rep;
    rep.iterations = iterations;
    rep.damping = theta;
    rep.residual_norm =
        bessel_norm(u[j] - reconstruct_from_transport(u0, tr, cfg.interpolation), beta, cfg.p);
    rep.min_det = determinant(grad_map(tr.labels)).min();
    s = assemble(tr, u[j], u[j] - u[j - 1], u0, cfg.interpolation);
    check_blowup(s, cfg);
    record(s, rep);
  }
  return result;
}

}  // namespace

SolveResult solve(const ScalarField& rho0, const VectorField& u0, const PressureLaw& law,
                  double T, const PicardConfig& cfg, const LagrangianObserver& observer,
                  bool keep_states) {
  require_same_grid(rho0.grid(), u0.grid(), "solve");
  require(T >= 0.0, "solve: T must be non-negative");
  cfg.validate(rho0.grid());
  check_density(law, rho0);
  if (cfg.mode == PicardMode::Global)
    return solve_global(rho0, u0, law, T, cfg, observer, keep_states);
  return solve_stepwise(rho0, u0, law, T, cfg, observer, keep_states);
}

}  // namespace lagflow
