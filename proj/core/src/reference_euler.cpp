#include "lagflow/reference_euler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lagflow/error.hpp"
#include "lagflow/spectral.hpp"

namespace lagflow {

namespace {

// (u.grad) f, dealiased.
ScalarField advective_derivative(const VectorField& u, const ScalarField& f) {
  ScalarField acc(f.grid());
  for (int i = 0; i < u.dim(); ++i) acc += u[i] * partial(f, i);
  return dealias(acc);
}

EulerState axpy(const EulerState& s, double h, const EulerRhs& k) {
  EulerState out = s;
  for (std::size_t i = 0; i < out.rho.size(); ++i) out.rho[i] += h * k.drho[i];
  for (int c = 0; c < out.u.dim(); ++c)
    for (std::size_t i = 0; i < out.rho.size(); ++i) out.u[c][i] += h * k.du[c][i];
  return out;
}

double max_velocity_gradient(const VectorField& u) {
  double m = 0.0;
  for (int i = 0; i < u.dim(); ++i)
    for (int j = 0; j < u.dim(); ++j) m = std::max(m, partial(u[i], j).max_abs());
  return m;
}

long step_count(double span, double dt) {
  return static_cast<long>(std::ceil(span / dt - 1e-9));
}

}  // namespace

EulerRhs euler_rhs(const EulerState& state, const PressureLaw& law) {
  const ScalarField h = enthalpy_field(law, state.rho);
  ScalarField drho = advective_derivative(state.u, state.rho);
  drho += dealiased_product(state.rho, divergence(state.u));
  drho *= -1.0;

  VectorField du(state.u.grid());
  for (int j = 0; j < state.u.dim(); ++j) {
    du[j] = advective_derivative(state.u, state.u[j]);
    du[j] += partial(dealias(h), j);
    du[j] *= -1.0;
  }
  return {std::move(drho), std::move(du)};
}

double cfl_limit(const EulerState& state, const PressureLaw& law) {
  check_density(law, state.rho);
  double cmax = 0.0;
  for (std::size_t i = 0; i < state.rho.size(); ++i)
    cmax = std::max(cmax, law.sound_speed(state.rho[i]));
  double umax = 0.0;
  for (std::size_t i = 0; i < state.rho.size(); ++i) {
    double s = 0.0;
    for (int c = 0; c < state.u.dim(); ++c) s += state.u[c][i] * state.u[c][i];
    umax = std::max(umax, std::sqrt(s));
  }
  return 0.5 * state.rho.grid().spacing() / (umax + cmax);
}

void rk4_march(const EulerState& state0, const PressureLaw& law, double T, double dt,
               const std::function<void(const EulerState&)>& observer,
               const ReferenceOptions& options) {
  require(dt > 0.0, "rk4_march: dt must be positive");
  require(T >= state0.t, "rk4_march: final time precedes the initial state");
  require_same_grid(state0.rho.grid(), state0.u.grid(), "rk4_march");
  check_density(law, state0.rho);

  EulerState s = state0;
  if (observer) observer(s);
  const long steps = step_count(T - state0.t, dt);
  for (long n = 0; n < steps; ++n) {
    const double h = (n + 1 == steps) ? T - s.t : dt;
    try {
      if (options.enforce_cfl) {
        const double limit = cfl_limit(s, law);
        if (h > limit * (1.0 + 1e-12)) {
          std::ostringstream os;
          os << "dt=" << h << " exceeds the CFL bound " << limit;
          fail(ErrorKind::CflViolation, os.str());
        }
      }
      const EulerRhs k1 = euler_rhs(s, law);
      const EulerRhs k2 = euler_rhs(axpy(s, 0.5 * h, k1), law);
      const EulerRhs k3 = euler_rhs(axpy(s, 0.5 * h, k2), law);
      const EulerRhs k4 = euler_rhs(axpy(s, h, k3), law);
      EulerState next = s;
      for (std::size_t i = 0; i < s.rho.size(); ++i)
        next.rho[i] += h / 6.0 * (k1.drho[i] + 2.0 * k2.drho[i] + 2.0 * k3.drho[i] + k4.drho[i]);
      for (int c = 0; c < s.u.dim(); ++c)
        for (std::size_t i = 0; i < s.rho.size(); ++i)
          next.u[c][i] +=
              h / 6.0 * (k1.du[c][i] + 2.0 * k2.du[c][i] + 2.0 * k3.du[c][i] + k4.du[c][i]);
      next.t = s.t + h;

      if (!next.rho.all_finite() || !next.u.all_finite())
        throw Error(ErrorKind::Blowup, "non-finite state", next.t);
      const double gradient_scale = max_velocity_gradient(next.u) * dt;
      if (gradient_scale > options.blowup_threshold) {
        std::ostringstream os;
        os << "approaching blowup: max|grad u|*dt = " << gradient_scale << " > "
           << options.blowup_threshold;
        throw Error(ErrorKind::Blowup, os.str(), next.t);
      }
      const double tail = resolution_indicator(next.u);
      if (tail > options.resolution_threshold) {
        std::ostringstream os;
        os << "approaching blowup: gradients reached the grid scale (resolution indicator "
           << tail << " > " << options.resolution_threshold << ")";
        throw Error(ErrorKind::Blowup, os.str(), next.t);
      }
      check_density(law, next.rho);
      s = std::move(next);
    } catch (const Error& e) {
      throw e.at_time(s.t + h);
    }
    if (observer) observer(s);
  }
}

std::vector<EulerState> rk4_solve(const EulerState& state0, const PressureLaw& law, double T,
                                  double dt, const ReferenceOptions& options) {
  std::vector<EulerState> out;
  rk4_march(state0, law, T, dt, [&](const EulerState& s) { out.push_back(s); }, options);
  return out;
}

ScalarField advect_solve(const VelocityHistory& u, const ScalarField& f0, double T, double dt) {
  require(dt > 0.0, "advect_solve: dt must be positive");
  require_same_grid(u.grid(), f0.grid(), "advect_solve");
  if (!u.covers(0.0, T)) fail(ErrorKind::HistoryGap, "advect_solve: history does not cover [0, T]");
  auto rhs = [&](double t, const ScalarField& f) {
    return -1.0 * advective_derivative(u.at(t), f);
  };
  ScalarField f = f0;
  double t = 0.0;
  const long steps = step_count(T, dt);
  for (long n = 0; n < steps; ++n) {
    const double h = (n + 1 == steps) ? T - t : dt;
    const ScalarField k1 = rhs(t, f);
    const ScalarField k2 = rhs(t + 0.5 * h, f + (0.5 * h) * k1);
    const ScalarField k3 = rhs(t + 0.5 * h, f + (0.5 * h) * k2);
    const ScalarField k4 = rhs(t + h, f + h * k3);
    for (std::size_t i = 0; i < f.size(); ++i)
      f[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t += h;
    if (!f.all_finite()) throw Error(ErrorKind::Blowup, "advect_solve: non-finite field", t);
  }
  return f;
}

}  // namespace lagflow
