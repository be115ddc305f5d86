#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "lagflow/field.hpp"

namespace lagflow {

enum class Interpolation {
  Spectral,     // trigonometric interpolant, exact for resolved modes
  CubicSpline,  // periodic cubic B-spline, local 4^d stencil
};

Interpolation parse_interpolation(std::string_view name);
std::string_view to_string(Interpolation method);

/// One or more scalar fields on a shared grid, prepared for evaluation at
/// arbitrary points of the torus. Both representations are linear in the
/// data, so interpolants of the same method can be blended.
class PeriodicInterpolant {
 public:
  PeriodicInterpolant(std::vector<ScalarField> fields, Interpolation method);
  PeriodicInterpolant(const ScalarField& field, Interpolation method);
  PeriodicInterpolant(const VectorField& field, Interpolation method);

  /// (1 - lambda) * a + lambda * b, coefficientwise.
  static PeriodicInterpolant blend(const PeriodicInterpolant& a,
                                   const PeriodicInterpolant& b, double lambda);

  const TorusGrid& grid() const noexcept { return grid_; }
  Interpolation method() const noexcept { return method_; }
  int field_count() const noexcept { return count_; }

  /// Evaluates every field at `x`; out.size() must equal field_count().
  void eval(const Point& x, std::span<double> out) const;
  double eval(const Point& x) const;


 private:
  void eval_spectral(const Point& x, std::span<double> out) const;
  void eval_spline(const Point& x, std::span<double> out) const;

  TorusGrid grid_;
  Interpolation method_;
  int count_;
  // Spectral: weighted half-spectrum coefficients per field.
  // Spline: B-spline control values per field (real, stored as .real()).
  std::vector<std::vector<std::complex<double>>> coeffs_;
};

}  // namespace lagflow
