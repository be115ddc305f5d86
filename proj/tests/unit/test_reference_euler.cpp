#include <catch_amalgamated.hpp>

#include "lagflow/error.hpp"
#include "lagflow/initial_data.hpp"
#include "lagflow/reference_euler.hpp"
#include "lagflow/spectral.hpp"
#include "test_support.hpp"

using namespace lagflow;
using namespace lagflow::testing;
using Catch::Approx;

namespace {

const PressureLaw kLaw = gamma_law(1.0, 1.4);

EulerState preset_state(const char* name, int n, int d = 1) {
  const auto data = band_limited(make_preset(name, TorusGrid::make(d, n)));
  return EulerState{0.0, data.rho, data.u};
}

EulerState final_state(const EulerState& s0, double T, double dt) {
  EulerState last = s0;
  rk4_march(s0, kLaw, T, dt, [&](const EulerState& s) { last = s; });
  return last;
}

}  // namespace

TEST_CASE("euler_rhs vanishes on constant states", "[reference]") {
  for (int d = 1; d <= 2; ++d) {
    const auto g = TorusGrid::make(d, 16);
    const auto r1 = euler_rhs({0.0, ScalarField(g, 1.7), constant_vector(g, 0.3, -0.2)}, kLaw);
    CHECK(r1.drho.max_abs() <= 1e-14);
    CHECK(r1.du.max_abs() <= 1e-14);
    const auto r2 = euler_rhs({0.0, ScalarField(g, 1.0), constant_vector(g, 2.0, 1.0)}, kLaw);
    CHECK(r2.drho.max_abs() <= 1e-14);
    CHECK(r2.du.max_abs() <= 1e-14);
  }
}

TEST_CASE("euler_rhs matches nodewise evaluation", "[reference]") {
  const auto g = TorusGrid::make(1, 128);
  const auto rho = sample(g, [](Point x) { return 1.0 + 0.2 * std::sin(x[0]); });
  const auto r = euler_rhs({0.0, rho, VectorField(g)}, kLaw);
  CHECK(r.drho.max_abs() <= 1e-13);
  const auto expected = sample(g, [](Point x) {
    const double rr = 1.0 + 0.2 * std::sin(x[0]);
    return -kLaw.dh(rr) * 0.2 * std::cos(x[0]);
  });
  CHECK(max_diff(r.du[0], expected) <= 1e-10);
}

TEST_CASE("constant data gives a flat trajectory", "[reference]") {
  const auto g = TorusGrid::make(2, 16);
  const EulerState s0{0.0, ScalarField(g, 1.0), constant_vector(g, 0.5, 0.5)};
  const auto states = rk4_solve(s0, kLaw, 1.0, 0.05);
  REQUIRE(states.size() == 21);
  CHECK(states.back().t == Approx(1.0));
  for (const auto& s : states) {
    CHECK(max_diff(s.rho, s0.rho) <= 1e-12);
    CHECK(max_diff(s.u, s0.u) <= 1e-12);
  }
}

TEST_CASE("linear acoustic wave travels at the sound speed", "[reference]") {
  const auto g = TorusGrid::make(1, 32);
  const double eps = 1e-3;
  const double c0 = kLaw.sound_speed(1.0);
  const EulerState s0{0.0, sample(g, [eps](Point x) { return 1.0 + eps * std::cos(x[0]); }), VectorField(g)};
  const auto sin_x = sample(g, [](Point x) { return std::sin(x[0]); });
  // Linear theory: mean(u sin x) = (c0 eps / 2) sin(c0 t), first zero at pi / c0.
  double prev_t = 0.0, prev_g = 0.0, crossing = -1.0;
  rk4_march(s0, kLaw, 3.2, 1e-2, [&](const EulerState& s) {
    const double gval = (s.u[0] * sin_x).mean();
    if (crossing < 0.0 && s.t > 1.0 && prev_g > 0.0 && gval <= 0.0)
      crossing = prev_t + (s.t - prev_t) * prev_g / (prev_g - gval);
    prev_t = s.t;
    prev_g = gval;
  });
  REQUIRE(crossing > 0.0);
  const double c_measured = kPi / crossing;
  CHECK(std::abs(c_measured - c0) <= 0.02 * c0);
}

TEST_CASE("spatial self-convergence on poisson-kernel data", "[reference]") {
  const double T = 0.1, dt = 1e-3;
  const auto fine = final_state(preset_state("poisson", 512), T, dt);
  double err[2];
  int i = 0;
  for (int n : {64, 128}) {
    const auto coarse = final_state(preset_state("poisson", n), T, dt);
    err[i++] = l2_norm(coarse.rho - restrict_to(fine.rho, coarse.rho.grid()));
  }
  CHECK(err[0] / err[1] >= 10.0);
}

TEST_CASE("fourth-order convergence in time", "[reference]") {
  const auto s0 = preset_state("smooth", 32);
  const double T = 0.8;
  const auto ref = final_state(s0, T, 0.0025);
  const double e1 = l2_norm(final_state(s0, T, 0.04).u - ref.u);
  const double e2 = l2_norm(final_state(s0, T, 0.02).u - ref.u);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.5);
  CHECK(order <= 4.5);
}

TEST_CASE("mass is conserved", "[reference]") {
  const auto s0 = preset_state("smooth", 128);
  const double m0 = s0.rho.mean();
  double drift = 0.0;
  rk4_march(s0, kLaw, 0.5, 1e-3, [&](const EulerState& s) { drift = std::max(drift, std::abs(s.rho.mean() - m0) / m0); });
  CHECK(drift <= 0.5e-10);
}

TEST_CASE("momentum form residual of the primitive solution", "[reference]") {
  const auto s0 = preset_state("smooth", 128);
  const double dt = 5e-4;
  std::vector<EulerState> states = rk4_solve(s0, kLaw, 0.1, dt);
  auto momentum = [](const EulerState& s) { return s.rho * s.u[0]; };
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < states.size(); j += 20) {
    const auto& s = states[j];
    ScalarField dt_m = momentum(states[j + 1]) - momentum(states[j - 1]);
    dt_m *= 1.0 / (2.0 * dt);
    ScalarField pressure(s.rho.grid());
    for (std::size_t i = 0; i < pressure.size(); ++i) pressure[i] = kLaw.p(s.rho[i]);
    const ScalarField flux = s.rho * s.u[0] * s.u[0] + pressure;
    worst = std::max(worst, l2_norm(dt_m + partial(flux, 0)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("advect_solve", "[reference]") {
  const auto g = TorusGrid::make(1, 64);
  const auto f0 = sample(g, [](Point x) { return std::exp(std::sin(x[0])); });
  CHECK(max_diff(advect_solve(VelocityHistory::steady(VectorField(g), 0.0, 0.5), f0, 0.5, 1e-2), f0) <= 1e-14);

  const double c = 0.7, T = 0.5;
  const auto band = dealias(sample(g, [](Point x) { return std::sin(x[0]) + 0.5 * std::cos(3 * x[0]); }));
  const auto moved = advect_solve(VelocityHistory::steady(constant_vector(g, c), 0.0, T), band, T, 1e-3);
  const auto exact = sample(g, [&](Point x) { return std::sin(x[0] - c * T) + 0.5 * std::cos(3 * (x[0] - c * T)); });
  CHECK(max_diff(moved, exact) <= 1e-8);
}

TEST_CASE("advect_solve agrees with transport along characteristics", "[reference]") {
  const auto g = TorusGrid::make(1, 128);
  const double T = 0.2;
  const auto u = VelocityHistory::steady(along_first(sample(g, [](Point x) { return std::sin(x[0]); })), 0.0, T);
  const auto f0 = sample(g, [](Point x) { return std::cos(x[0]) + 0.3 * std::sin(2 * x[0]); });
  const auto eulerian = advect_solve(u, f0, T, 1e-3);
  const auto lagrangian = compose(f0, back_to_labels(u, T, g, 1e-3));
  CHECK(max_diff(eulerian, lagrangian) <= 1e-4);
}

TEST_CASE("reference solver error contract", "[reference]") {
  const auto s0 = preset_state("smooth", 64);
  try {
    rk4_solve(s0, kLaw, 1.0, 0.5);
    FAIL("expected a CFL violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CflViolation);
    REQUIRE(e.time().has_value());
  }

  const auto steep = preset_state("steep", 128);
  bool finite = true;
  try {
    rk4_march(steep, kLaw, 3.0, 1e-3, [&](const EulerState& s) { finite = finite && s.rho.all_finite() && s.u.all_finite(); });
    FAIL("expected blowup");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Blowup);
    REQUIRE(e.time().has_value());
    CHECK(*e.time() < 3.0);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("blowup at t="));
  }
  CHECK(finite);
}
