#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "lagflow/field.hpp"
#include "lagflow/flow.hpp"

namespace lagflow::testing {

inline constexpr double kPi = std::numbers::pi;

inline double max_diff(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs(); }
inline double max_diff(const VectorField& a, const VectorField& b) { return (a - b).max_abs(); }

template <class Fn>
ScalarField sample(const TorusGrid& g, Fn&& fn) {
  return ScalarField::sample(g, std::forward<Fn>(fn));
}

inline VectorField along_first(const ScalarField& f) {
  VectorField v(f.grid());
  v[0] = f;
  return v;
}

inline VectorField constant_vector(const TorusGrid& g, double c0, double c1 = 0.0) {
  VectorField v(g);
  v[0] += c0;
  if (g.dim() == 2) v[1] += c1;
  return v;
}

/// Random trigonometric polynomial with modes |k_i| <= kmax, deterministic in `seed`.
inline ScalarField random_trig(const TorusGrid& g, int kmax, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  ScalarField f(g);
  const int k1max = g.dim() == 2 ? kmax : 0;
  for (int k0 = 0; k0 <= kmax; ++k0) {
    for (int k1 = -k1max; k1 <= k1max; ++k1) {
      const double a = scale * amp(rng);
      const double b = scale * amp(rng);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const Point x = g.node(i);
        const double ph = k0 * x[0] + k1 * x[1];
        f[i] += a * std::cos(ph) + b * std::sin(ph);
      }
    }
  }
  return f;
}

/// Exact flow of dX/dt = sin X: tan(X/2) = e^t tan(a/2), continuous in a.
inline double sin_flow(double a, double t) {
  const double r = std::remainder(a, 2.0 * kPi);  // (-pi, pi]
  return a - r + 2.0 * std::atan(std::exp(t) * std::tan(0.5 * r));
}

/// Values of a fine one-dimensional field at the nodes of a coarser grid.
inline ScalarField restrict_to(const ScalarField& fine, const TorusGrid& coarse) {
  const int stride = fine.grid().n() / coarse.n();
  ScalarField out(coarse);
  for (int i = 0; i < coarse.n(); ++i) out[i] = fine[static_cast<std::size_t>(i * stride)];
  return out;
}

inline VectorField restrict_to(const VectorField& fine, const TorusGrid& coarse) {
  std::vector<ScalarField> comps;
  for (int c = 0; c < fine.dim(); ++c) comps.push_back(restrict_to(fine[c], coarse));
  return VectorField(std::move(comps));
}

}  // namespace lagflow::testing
