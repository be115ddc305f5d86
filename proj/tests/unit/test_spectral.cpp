#include <catch_amalgamated.hpp>

#include "lagflow/error.hpp"
#include "lagflow/spectral.hpp"
#include "test_support.hpp"

using namespace lagflow;
using namespace lagflow::testing;
using Catch::Approx;

TEST_CASE("grid construction", "[grid]") {
  const auto g = TorusGrid::make(1, 8);
  REQUIRE(g.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(g.node(i)[0] == Approx(i * kPi / 4));

  const auto g2 = TorusGrid::make(2, 16);
  CHECK(g2.size() == 256);
  CHECK(g2.spacing() == Approx(kPi / 8));

  CHECK_THROWS_WITH(TorusGrid::make(1, 7), Catch::Matchers::ContainsSubstring("n must be even"));
  CHECK_THROWS_AS(TorusGrid::make(1, 6), Error);
  CHECK_THROWS_AS(TorusGrid::make(3, 16), Error);
}

TEST_CASE("wavenumber table is symmetric with a single Nyquist mode", "[grid]") {
  const auto g = TorusGrid::make(1, 16);
  CHECK(g.wavenumber(0) == 0);
  CHECK(g.wavenumber(8) == 8);
  CHECK(g.is_nyquist(8));
  CHECK(g.wavenumber(9) == -7);
  CHECK(g.wavenumber(15) == -1);
  CHECK(g.dealias_cutoff() == 5);
}

TEST_CASE("gradient of resolved modes", "[gradient]") {
  const auto g1 = TorusGrid::make(1, 64);
  CHECK(gradient(ScalarField(g1, 3.0)).max_abs() <= 1e-14);
  const auto grad = gradient(sample(g1, [](Point x) { return std::sin(x[0]); }));
  CHECK(max_diff(grad[0], sample(g1, [](Point x) { return std::cos(x[0]); })) <= 1e-12);

  const auto g2 = TorusGrid::make(2, 32);
  const auto grad2 = gradient(sample(g2, [](Point x) { return std::sin(x[0]) * std::cos(x[1]); }));
  CHECK(max_diff(grad2[0], sample(g2, [](Point x) { return std::cos(x[0]) * std::cos(x[1]); })) <= 1e-12);
  CHECK(max_diff(grad2[1], sample(g2, [](Point x) { return -std::sin(x[0]) * std::sin(x[1]); })) <= 1e-12);
}

TEST_CASE("divergence", "[divergence]") {
  const auto g1 = TorusGrid::make(1, 32);
  CHECK(divergence(constant_vector(g1, 2.5)).max_abs() <= 1e-14);
  const auto div = divergence(along_first(sample(g1, [](Point x) { return std::sin(x[0]); })));
  CHECK(max_diff(div, sample(g1, [](Point x) { return std::cos(x[0]); })) <= 1e-12);

  // Perpendicular gradient of the stream function sin x sin y.
  const auto g2 = TorusGrid::make(2, 32);
  const auto psi = sample(g2, [](Point x) { return std::sin(x[0]) * std::sin(x[1]); });
  VectorField u(g2);
  u[0] = partial(psi, 1);
  u[1] = -partial(psi, 0);
  CHECK(divergence(u).max_abs() <= 1e-12);
}

TEST_CASE("derivatives are exact on random band-limited polynomials", "[gradient][property]") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto g = TorusGrid::make(2, 24);
    const int kmax = g.dealias_cutoff();
    // f = sum a cos + b sin; compare against the analytic derivative of the same sum.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    ScalarField f(g), fx(g), fy(g);
    for (int k0 = 0; k0 <= kmax; ++k0)
      for (int k1 = -kmax; k1 <= kmax; ++k1) {
        const double a = amp(rng), b = amp(rng);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const Point x = g.node(i);
          const double ph = k0 * x[0] + k1 * x[1];
          f[i] += a * std::cos(ph) + b * std::sin(ph);
          fx[i] += k0 * (-a * std::sin(ph) + b * std::cos(ph));
          fy[i] += k1 * (-a * std::sin(ph) + b * std::cos(ph));
        }
      }
    CHECK(max_diff(partial(f, 0), fx) <= 1e-11);
    CHECK(max_diff(partial(f, 1), fy) <= 1e-11);
  }
}

TEST_CASE("Nyquist mode has zero derivative", "[gradient]") {
  const auto g = TorusGrid::make(1, 16);
  const auto f = sample(g, [](Point x) { return std::cos(8 * x[0]); });
  CHECK(partial(f, 0).max_abs() <= 1e-13);
}

TEST_CASE("bessel_apply", "[bessel]") {
  const auto g = TorusGrid::make(1, 32);
  const auto f = random_trig(g, 6, 7);
  CHECK(max_diff(bessel_apply(f, 0.0), f) <= 1e-14);
  const ScalarField c(g, 2.0);
  CHECK(max_diff(bessel_apply(c, 3.7), c) <= 1e-14);
  const auto s2 = sample(g, [](Point x) { return std::sin(2 * x[0]); });
  CHECK(max_diff(bessel_apply(s2, 2.0), 5.0 * s2) <= 1e-13);
}

TEST_CASE("bessel_apply with opposite exponents is the identity", "[bessel][property]") {
  for (int d = 1; d <= 2; ++d) {
    const auto g = TorusGrid::make(d, 32);
    const auto f = random_trig(g, g.dealias_cutoff(), 11 + d);
    CHECK(max_diff(bessel_apply(bessel_apply(f, 2.3), -2.3), f) <= 1e-10);
  }
}

TEST_CASE("bessel_norm", "[bessel]") {
  const auto g = TorusGrid::make(1, 64);
  CHECK(bessel_norm(ScalarField(g, -3.0), 2.5, 3.0) == Approx(3.0).epsilon(1e-14));
  const auto s1 = sample(g, [](Point x) { return std::sin(x[0]); });
  CHECK(bessel_norm(s1, 0.0, 2.0) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  // Dense-quadrature oracle: 10^(3/4) * (mean sin^4)^(1/4) on 2e5 points.
  const auto s3 = sample(g, [](Point x) { return std::sin(3 * x[0]); });
  CHECK(std::abs(bessel_norm(s3, 1.5, 4.0) - 4.400558683966968) <= 1e-10);
  CHECK_THROWS_AS(bessel_norm(s1, 1.0, 1.0), Error);
  CHECK_THROWS_AS(bessel_norm(s1, 1.0, 0.5), Error);
}

TEST_CASE("bessel_norm with beta 0 and p 2 is the L2 norm", "[bessel][property]") {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const auto g = TorusGrid::make(2, 16);
    const auto f = random_trig(g, 4, seed);
    CHECK(std::abs(bessel_norm(f, 0.0, 2.0) - l2_norm(f)) <= 1e-12 * std::max(1.0, l2_norm(f)));
  }
}

TEST_CASE("heat_smooth", "[heat]") {
  const auto g = TorusGrid::make(1, 32);
  const auto f = random_trig(g, 5, 3);
  CHECK(max_diff(heat_smooth(f, 0.0), f) <= 1e-14);
  const ScalarField c(g, 4.0);
  CHECK(max_diff(heat_smooth(c, 0.3), c) <= 1e-14);
  const auto s1 = sample(g, [](Point x) { return std::sin(x[0]); });
  CHECK(max_diff(heat_smooth(s1, 0.1), std::exp(-0.1) * s1) <= 1e-14);
  CHECK_THROWS_AS(heat_smooth(f, -1e-3), Error);
}

TEST_CASE("heat_smooth semigroup law", "[heat][property]") {
  for (int d = 1; d <= 2; ++d) {
    const auto g = TorusGrid::make(d, 16);
    const auto f = random_trig(g, 5, 40 + d);
    CHECK(max_diff(heat_smooth(heat_smooth(f, 0.013), 0.021), heat_smooth(f, 0.034)) <= 1e-12);
  }
}

TEST_CASE("smoothing_gap", "[heat]") {
  const auto g = TorusGrid::make(1, 64);
  CHECK(smoothing_gap(2.0, 1e-3, g) == Approx(0.6408445586705954).epsilon(1e-14));
  // Brute force over all modes of the grid.
  double brute = 0.0;
  for (int k = -31; k <= 32; ++k) brute = std::max(brute, 1.0 - std::exp(-1e-3 * k * k));
  CHECK(smoothing_gap(2.0, 1e-3, g) == Approx(brute).epsilon(1e-14));

  double previous = 0.0;
  for (double eps : {1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 3e-2}) {
    const double gap = smoothing_gap(3.0, eps, g);
    CHECK(gap >= 0.0);
    CHECK(gap < 1.0);
    CHECK(gap > previous);
    previous = gap;
  }
  CHECK(smoothing_gap(2.0, 1e-12, g) < 1e-8);
  const auto g2 = TorusGrid::make(2, 16);
  CHECK(smoothing_gap(2.0, 1e-3, g2) == Approx(-std::expm1(-1e-3 * 128)).epsilon(1e-14));
  CHECK_THROWS_AS(smoothing_gap(2.0, -1.0, g), Error);
}

TEST_CASE("dealias", "[dealias]") {
  const auto g = TorusGrid::make(1, 32);
  const auto low = random_trig(g, g.dealias_cutoff(), 5);
  CHECK(max_diff(dealias(low), low) <= 1e-13);
  const auto nyq = sample(g, [](Point x) { return std::cos(16 * x[0]); });
  CHECK(dealias(nyq).max_abs() <= 1e-14);
  const auto f = random_trig(g, 15, 6);
  CHECK(max_diff(dealias(dealias(f)), dealias(f)) <= 1e-14);

  const auto g2 = TorusGrid::make(2, 16);
  const auto f2 = random_trig(g2, 7, 8);
  CHECK(max_diff(dealias(dealias(f2)), dealias(f2)) <= 1e-14);
  const auto hi = sample(g2, [](Point x) { return std::sin(x[0] + 6 * x[1]); });
  CHECK(dealias(hi).max_abs() <= 1e-14);
}

TEST_CASE("spectrum round trip", "[fft]") {
  const auto g = TorusGrid::make(2, 16);
  const auto f = random_trig(g, 7, 9);
  CHECK(max_diff(from_spectrum(to_spectrum(f)), f) <= 1e-13);
  const auto s = to_spectrum(sample(TorusGrid::make(1, 16), [](Point x) { return 2.0 + std::cos(3 * x[0]); }));
  CHECK(std::abs(s.coeffs[0] - std::complex<double>(2.0, 0.0)) <= 1e-15);
  CHECK(std::abs(s.coeffs[3] - std::complex<double>(0.5, 0.0)) <= 1e-15);
}

TEST_CASE("resolution indicator separates smooth and grid-scale fields", "[dealias]") {
  const auto g = TorusGrid::make(1, 128);
  const auto smooth = along_first(sample(g, [](Point x) { return std::sin(x[0]); }));
  CHECK(resolution_indicator(smooth) <= 1e-12);
  const auto rough = along_first(sample(g, [](Point x) { return std::sin(x[0]) + std::sin(40 * x[0]); }));
  CHECK(resolution_indicator(rough) > 0.9);
  CHECK(resolution_indicator(VectorField(g)) == 0.0);
}
