#include <catch_amalgamated.hpp>

#include <optional>

#include "lagflow/error.hpp"
#include "lagflow/frechet.hpp"
#include "lagflow/initial_data.hpp"
#include "lagflow/lagrangian.hpp"
#include "lagflow/reference_euler.hpp"
#include "lagflow/spectral.hpp"
#include "test_support.hpp"

using namespace lagflow;
using namespace lagflow::testing;
using Catch::Approx;

namespace {

const PressureLaw kLaw = gamma_law(1.0, 1.4);

InitialData preset(const char* name, int n, int d = 1) {
  return band_limited(make_preset(name, TorusGrid::make(d, n)));
}

VectorField sin_velocity(const TorusGrid& g, double amp = 1.0) {
  return along_first(sample(g, [amp](Point x) { return amp * std::sin(x[0]); }));
}

PicardConfig config(double dt) {
  PicardConfig cfg;
  cfg.dt = dt;
  return cfg;
}

}  // namespace

TEST_CASE("initial state", "[lagrangian]") {
  const auto d = preset("smooth", 32);
  const auto s = initial_state(d.rho, d.u, kLaw);
  CHECK(s.t == 0.0);
  CHECK(s.A.is_identity());
  CHECK(s.q.max_abs() == 0.0);
  CHECK(max_diff(s.v, d.u) == 0.0);
  CHECK(max_diff(s.u, d.u) == 0.0);
  CHECK(max_diff(s.rho, d.rho) == 0.0);
}

TEST_CASE("virtual velocity", "[lagrangian]") {
  const auto g = TorusGrid::make(1, 64);
  const auto u0 = along_first(sample(g, [](Point x) { return std::cos(x[0]) + 0.2 * std::sin(2 * x[0]); }));
  CHECK(max_diff(virtual_velocity(u0, FlowMap::identity(g)), u0) == 0.0);

  const double c = 0.6, t = 0.7;
  const auto a = back_to_labels(VelocityHistory::steady(constant_vector(g, c), 0.0, t), t, g, 0.1);
  const auto expected = along_first(sample(g, [&](Point x) { return std::cos(x[0] - c * t) + 0.2 * std::sin(2 * (x[0] - c * t)); }));
  CHECK(max_diff(virtual_velocity(u0, a), expected) <= 1e-12);
}

TEST_CASE("virtual velocity agrees with the advection PDE", "[lagrangian]") {
  const auto g = TorusGrid::make(1, 128);
  const double T = 0.2;
  VelocityHistory u({0.0, T}, {sin_velocity(g, 0.8), sin_velocity(g, 1.2)});
  const auto u0 = along_first(sample(g, [](Point x) { return 0.5 * std::cos(x[0]) + 0.1; }));
  const auto v = virtual_velocity(u0, back_to_labels(u, T, g, 1e-3));
  CHECK(max_diff(v[0], advect_solve(u, u0[0], T, 1e-3)) <= 1e-4);
}

TEST_CASE("density from labels", "[lagrangian]") {
  const auto g = TorusGrid::make(1, 128);
  const auto rho0 = sample(g, [](Point x) { return 1.0 + 0.3 * std::sin(x[0]); });
  CHECK(max_diff(density_from_labels(rho0, FlowMap::identity(g)), rho0) == 0.0);

  const double c = -0.4, t = 0.5;
  const auto a = back_to_labels(VelocityHistory::steady(constant_vector(g, c), 0.0, t), t, g, 0.1);
  CHECK(max_diff(density_from_labels(rho0, a), sample(g, [&](Point x) { return 1.0 + 0.3 * std::sin(x[0] - c * t); })) <= 1e-12);

  const auto sin_labels = back_to_labels(VelocityHistory::steady(sin_velocity(g), 0.0, 0.2), 0.2, g, 1e-3);
  const auto rho = density_from_labels(rho0, sin_labels);
  CHECK(std::abs(rho.mean() - rho0.mean()) / rho0.mean() <= 1e-8);
}

TEST_CASE("accumulate_q", "[lagrangian]") {
  const auto g = TorusGrid::make(1, 64);
  const std::vector<double> times{0.0, 0.1, 0.2, 0.3, 0.4};
  std::vector<VectorField> us;
  for (double t : times) us.push_back(sin_velocity(g, 1.0 + t));
  const VelocityHistory flows(times, us);

  const std::vector<ScalarField> zero(times.size(), ScalarField(g));
  CHECK(accumulate_q(flows, zero, 0.0).max_abs() == 0.0);
  CHECK(accumulate_q(flows, zero, 0.4).max_abs() == 0.0);

  std::vector<ScalarField> anything;
  for (double t : times) anything.push_back(sample(g, [t](Point x) { return std::cos(x[0]) * (1.0 + t); }));
  CHECK(accumulate_q(flows, anything, 0.0).max_abs() == 0.0);

  // Spatially constant c(s) = 1 + s^2 / 2 integrates exactly under the
  // trapezoid rule up to the quadratic term: error dt^2 T / 12 * c''.
  std::vector<ScalarField> constant;
  for (double t : times) constant.push_back(ScalarField(g, 2.0 + 3.0 * t));
  const auto q = accumulate_q(flows, constant, 0.3);
  CHECK(max_diff(q, ScalarField(g, 2.0 * 0.3 + 1.5 * 0.09)) <= 1e-12);

  CHECK_THROWS_AS(accumulate_q(flows, constant, 0.25), Error);
  CHECK_THROWS_AS(accumulate_q(flows, std::vector<ScalarField>(2, ScalarField(g)), 0.3), Error);
}

TEST_CASE("velocity reconstruction", "[lagrangian]") {
  const auto d = preset("smooth", 64);
  CHECK(max_diff(reconstruct_velocity(d.u, FlowMap::identity(d.u.grid()), ScalarField(d.u.grid())), d.u) == 0.0);

  const auto g = d.u.grid();
  const double c = 0.3, t = 0.5;
  const auto a = back_to_labels(VelocityHistory::steady(constant_vector(g, c), 0.0, t), t, g, 0.1);
  const auto expected = along_first(sample(g, [&](Point x) { return 0.1 * std::sin(x[0] - c * t); }));
  CHECK(max_diff(reconstruct_velocity(d.u, a, ScalarField(g)), expected) <= 1e-12);

  // The potential enters with a minus sign.
  const auto q = sample(g, [](Point x) { return std::sin(2 * x[0]); });
  const auto with_q = reconstruct_velocity(d.u, FlowMap::identity(g), q);
  CHECK(max_diff(with_q[0], d.u[0] - sample(g, [](Point x) { return 2.0 * std::cos(2 * x[0]); })) <= 1e-12);
}

TEST_CASE("residual vanishes at the base point", "[lagrangian]") {
  for (const char* name : {"rest", "uniform_flow", "acoustic", "smooth", "poisson"}) {
    const auto d = preset(name, 128);
    const auto hist = VelocityHistory::steady(d.u, 0.0, 0.1);
    CHECK(residual_F(0.0, hist, d.rho, d.u, kLaw).max_abs() <= 1e-12);
    CHECK(regularized_residual(0.0, hist, d.rho, d.u, kLaw, 1e-3).max_abs() <= 1e-12);
  }
}

TEST_CASE("residual derivative at the base point is the identity", "[lagrangian]") {
  const auto d = preset("smooth", 128);
  const auto g = d.u.grid();
  const double t = 0.02;
  const auto w = sin_velocity(g);
  auto F = [&](const VectorField& u) { return residual_F(t, VelocityHistory::steady(u, 0.0, t), d.rho, d.u, kLaw); };
  std::vector<VectorField> fd;
  for (double delta : {1e-2, 1e-3, 1e-4}) fd.push_back(fd_gateaux(F, d.u, w, delta));
  CHECK(relative_error(w, fd.back()).l2 <= 1e-3);
  const double slope = std::log10(l2_norm(fd[0] - fd[1]) / l2_norm(fd[1] - fd[2]));
  CHECK(slope == Approx(2.0).margin(0.2));
}

TEST_CASE("regularized residual", "[lagrangian]") {
  const auto d = preset("smooth", 128);
  const auto g = d.u.grid();
  const double t = 0.02, eps = 0.05;
  const auto w = along_first(sample(g, [](Point x) { return std::sin(x[0]) + 0.5 * std::cos(3 * x[0]); }));
  const auto hist = VelocityHistory::steady(d.u + 0.01 * w, 0.0, t);
  CHECK(max_diff(regularized_residual(t, hist, d.rho, d.u, kLaw, 0.0), residual_F(t, hist, d.rho, d.u, kLaw)) == 0.0);
  CHECK_THROWS_AS(regularized_residual(t, hist, d.rho, d.u, kLaw, -1.0), Error);

  auto F = [&](const VectorField& u) {
    return regularized_residual(t, VelocityHistory::steady(u, 0.0, t), d.rho, d.u, kLaw, eps);
  };
  const auto target = heat_smooth(w, eps);
  CHECK(relative_error(target, fd_gateaux(F, d.u, w, 1e-4)).l2 <= 1e-3);
  CHECK(relative_error(w, fd_gateaux(F, d.u, w, 1e-4)).l2 > 0.1);
}

TEST_CASE("residual requires a history from zero", "[lagrangian]") {
  const auto d = preset("smooth", 32);
  try {
    residual_F(0.5, VelocityHistory::steady(d.u, 0.0, 0.2), d.rho, d.u, kLaw);
    FAIL("expected a history gap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HistoryGap);
  }
  CHECK_THROWS_AS(residual_F(0.1, VelocityHistory::steady(d.u, 0.05, 0.2), d.rho, d.u, kLaw), Error);
}

TEST_CASE("solver history satisfies the residual between knots", "[lagrangian]") {
  const auto d = preset("smooth", 64);
  const PicardConfig cfg = config(0.01);
  const auto sol = solve(d.rho, d.u, kLaw, 0.03, cfg);
  std::vector<double> times;
  std::vector<VectorField> us;
  for (const auto& s : sol.states) {
    times.push_back(s.t);
    us.push_back(s.u);
  }
  const VelocityHistory hist(times, us);
  const double beta = cfg.beta_for(d.u.grid());
  for (double t : {0.01, 0.02, 0.03})
    CHECK(bessel_norm(residual_F(t, hist, d.rho, d.u, kLaw), beta, 2.0) <= 10.0 * cfg.picard_tol);
  // Between knots the linear-in-time history is only second order accurate.
  const double mid = residual_F(0.025, hist, d.rho, d.u, kLaw).max_abs();
  CHECK(mid > 1e-9);
  CHECK(mid <= 1e-3);
}

TEST_CASE("Picard step on constant states", "[lagrangian]") {
  for (int d = 1; d <= 2; ++d) {
    const auto g = TorusGrid::make(d, 16);
    const ScalarField rho(g, 1.0);
    SECTION("rest") {
      const VectorField u(g);
      const auto r = picard_step(initial_state(rho, u, kLaw), config(0.01), rho, u, kLaw);
      CHECK(r.report.iterations == 1);
      CHECK(r.state.u.max_abs() <= 1e-14);
      CHECK(max_diff(r.state.rho, rho) <= 1e-14);
    }
    SECTION("translation") {
      const auto u = constant_vector(g, 0.4, -0.3);
      auto s = initial_state(rho, u, kLaw);
      for (int k = 0; k < 5; ++k) s = picard_step(s, config(0.05), rho, u, kLaw).state;
      CHECK(s.t == Approx(0.25));
      CHECK(max_diff(s.u, u) <= 1e-12);
      CHECK(max_diff(s.rho, rho) <= 1e-12);
    }
  }
}

TEST_CASE("residual certificate holds at every accepted step", "[lagrangian]") {
  const auto d = preset("smooth", 128);
  const auto cfg = config(1e-3);
  const auto sol = solve(d.rho, d.u, kLaw, 0.05, cfg, {}, false);
  REQUIRE(sol.diagnostics.size() == 51);
  CHECK(sol.states.empty());
  for (const auto& diag : sol.diagnostics) CHECK(diag.residual <= 10.0 * cfg.picard_tol);
}

TEST_CASE("Picard contraction scales with dt", "[lagrangian]") {
  const auto d = preset("smooth", 128);
  std::vector<double> ratio;
  for (double dt : {1e-3, 5e-4}) {
    PicardConfig cfg = config(dt);
    cfg.epsilon = 0.0;
    cfg.picard_tol = 1e-13;
    auto s = initial_state(d.rho, d.u, kLaw);
    // A deliberately poor first guess so the increments stay above round-off.
    s.last_increment = 1e-2 * d.u;
    const auto rep = picard_step(s, cfg, d.rho, d.u, kLaw).report;
    REQUIRE(rep.increments.size() >= 2);
    ratio.push_back(rep.increments[1] / rep.increments[0]);
    CHECK(ratio.back() < 1.0);
  }
  CHECK(ratio[0] / ratio[1] == Approx(2.0).epsilon(0.35));
}

TEST_CASE("no-convergence is reported with the failing time", "[lagrangian]") {
  const auto d = preset("smooth", 64);
  PicardConfig cfg = config(1e-2);
  cfg.max_iters = 1;
  try {
    solve(d.rho, d.u, kLaw, 0.1, cfg);
    FAIL("expected no-convergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
    REQUIRE(e.time().has_value());
    CHECK(*e.time() == Approx(0.01));
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("no-convergence at t="));
  }
}

TEST_CASE("constant data stays constant", "[lagrangian]") {
  const auto d = preset("rest", 32);
  const auto sol = solve(d.rho, d.u, kLaw, 1.0, config(0.05));
  for (const auto& diag : sol.diagnostics) {
    CHECK(diag.mass == Approx(1.0).margin(1e-12));
    CHECK(diag.u_norm <= 1e-12);
    CHECK(diag.min_rho == Approx(1.0).margin(1e-12));
    CHECK(diag.min_det == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("small-amplitude data oscillates at the sound speed", "[lagrangian]") {
  const auto g = TorusGrid::make(1, 32);
  const double eps = 1e-3;
  const auto rho0 = sample(g, [eps](Point x) { return 1.0 + eps * std::cos(x[0]); });
  const VectorField u0(g);
  const auto sin_x = sample(g, [](Point x) { return std::sin(x[0]); });
  double prev_t = 0.0, prev_g = 0.0, crossing = -1.0;
  solve(rho0, u0, kLaw, 3.0, config(1e-2), [&](const LagrangianState& s, const Diagnostics&) {
    const double gval = (s.u[0] * sin_x).mean();
    if (crossing < 0.0 && s.t > 1.0 && prev_g > 0.0 && gval <= 0.0)
      crossing = prev_t + (s.t - prev_t) * prev_g / (prev_g - gval);
    prev_t = s.t;
    prev_g = gval;
  }, false);
  REQUIRE(crossing > 0.0);
  const double c0 = kLaw.sound_speed(1.0);
  CHECK(std::abs(kPi / crossing - c0) <= 0.05 * c0);
}

TEST_CASE("Lagrangian and reference solutions agree", "[lagrangian]") {
  const auto d = preset("smooth", 64);
  const double T = 0.1, dt = 1e-3;
  const auto lag = solve(d.rho, d.u, kLaw, T, config(dt));
  const auto ref = rk4_solve({0.0, d.rho, d.u}, kLaw, T, dt);
  REQUIRE(lag.states.size() == ref.size());
  for (std::size_t j = 0; j < ref.size(); j += 10) {
    CHECK(relative_l2(lag.states[j].rho, ref[j].rho) <= 1e-4);
    CHECK(relative_l2(lag.states[j].u, ref[j].u) <= 1e-4);
  }
}

TEST_CASE("mass conservation along the solve", "[lagrangian]") {
  const auto d = preset("smooth", 128);
  const auto sol = solve(d.rho, d.u, kLaw, 0.2, config(1e-3), {}, false);
  const double m0 = sol.diagnostics.front().mass;
  for (const auto& diag : sol.diagnostics) CHECK(std::abs(diag.mass - m0) / m0 <= 1e-8 * 0.2);
}

TEST_CASE("regularization has no visible effect on resolved data", "[lagrangian]") {
  const auto d = preset("smooth", 128);
  std::vector<LagrangianState> finals;
  for (double eps : {0.0, 1e-6, 1e-4}) {
    PicardConfig cfg = config(1e-3);
    cfg.epsilon = eps;
    std::optional<LagrangianState> last;
    solve(d.rho, d.u, kLaw, 0.1, cfg, [&](const LagrangianState& s, const Diagnostics&) { last = s; }, false);
    finals.push_back(*last);
  }
  CHECK(relative_l2(finals[1].u, finals[0].u) <= 1e-4);
  CHECK(relative_l2(finals[2].u, finals[0].u) <= 1e-4);
  CHECK(relative_l2(finals[2].rho, finals[0].rho) <= 1e-4);
}

TEST_CASE("two-dimensional solve and spline interpolation", "[lagrangian]") {
  const auto g = TorusGrid::make(2, 16);
  const auto rho0 = sample(g, [](Point x) { return 1.0 + 0.1 * std::sin(x[0]) * std::cos(x[1]); });
  VectorField u0(g);
  u0[1] = sample(g, [](Point x) { return 0.1 * std::sin(x[0]); });
  const double T = 0.05, dt = 5e-3;
  const auto ref = rk4_solve({0.0, rho0, u0}, kLaw, T, dt).back();
  for (auto method : {Interpolation::Spectral, Interpolation::CubicSpline}) {
    PicardConfig cfg = config(dt);
    cfg.interpolation = method;
    std::optional<LagrangianState> last;
    solve(rho0, u0, kLaw, T, cfg, [&](const LagrangianState& s, const Diagnostics&) { last = s; }, false);
    const double tol = method == Interpolation::Spectral ? 1e-5 : 1e-2;
    CHECK(relative_l2(last->rho, ref.rho) <= tol);
    CHECK(relative_l2(last->u, ref.u) <= tol);
  }
}

TEST_CASE("global Picard mode reproduces the stepwise solution", "[lagrangian]") {
  const auto d = preset("smooth", 64);
  PicardConfig cfg = config(5e-3);
  const auto stepwise = solve(d.rho, d.u, kLaw, 0.05, cfg);
  cfg.mode = PicardMode::Global;
  const auto global = solve(d.rho, d.u, kLaw, 0.05, cfg);
  REQUIRE(global.states.size() == stepwise.states.size());
  CHECK(relative_l2(global.states.back().u, stepwise.states.back().u) <= 1e-8);
  CHECK(relative_l2(global.states.back().rho, stepwise.states.back().rho) <= 1e-8);
}

TEST_CASE("steep data ends in an explicit error", "[lagrangian]") {
  const auto d = preset("steep", 128);
  bool finite = true;
  try {
    solve(d.rho, d.u, kLaw, 3.0, config(1e-3), [&](const LagrangianState& s, const Diagnostics&) {
      finite = finite && s.u.all_finite() && s.rho.all_finite();
    }, false);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::Blowup || e.kind() == ErrorKind::NoConvergence));
    REQUIRE(e.time().has_value());
  }
  CHECK(finite);
}

TEST_CASE("Picard configuration validation lists every problem", "[lagrangian]") {
  const auto g = TorusGrid::make(1, 16);
  PicardConfig cfg;
  cfg.dt = -1.0;
  cfg.damping = 2.0;
  cfg.p = 1.0;
  try {
    cfg.validate(g);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    const std::string msg = e.what();
    CHECK_THAT(msg, Catch::Matchers::ContainsSubstring("picard.dt"));
    CHECK_THAT(msg, Catch::Matchers::ContainsSubstring("picard.damping"));
    CHECK_THAT(msg, Catch::Matchers::ContainsSubstring("picard.p"));
  }
  PicardConfig strict;
  strict.enforce_norm_hypothesis = true;
  strict.beta = 1.2;
  CHECK_THROWS_AS(strict.validate(g), Error);
  CHECK(PicardConfig{}.beta_for(g) == Approx(2.0));
  CHECK(PicardConfig{}.beta_for(TorusGrid::make(2, 16)) == Approx(2.5));
  CHECK(PicardConfig{}.epsilon_for(g) == Approx(std::pow(2.0 * kPi / 16, 2) / 4));
}
