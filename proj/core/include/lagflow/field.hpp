#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "lagflow/grid.hpp"

namespace lagflow {

/// Real samples at the nodes of a TorusGrid.
class ScalarField {
 public:
  explicit ScalarField(TorusGrid grid, double value = 0.0);
  ScalarField(TorusGrid grid, std::vector<double> values);

  template <class Fn>
  static ScalarField sample(const TorusGrid& grid, Fn&& fn) {
    ScalarField f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) f.values_[i] = fn(grid.node(i));
    return f;
  }

  const TorusGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(const ScalarField& other);
  ScalarField& operator*=(double s);
  ScalarField& operator+=(double s);

  double min() const;
  double max() const;
  double max_abs() const;
  /// Mean over nodes, i.e. the integral under the normalized measure.
  double mean() const;
  bool all_finite() const;

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
ScalarField operator-(ScalarField a);

/// d component fields sharing one grid.
class VectorField {
 public:
  explicit VectorField(const TorusGrid& grid, double value = 0.0);
  explicit VectorField(std::vector<ScalarField> components);

  const TorusGrid& grid() const noexcept { return components_.front().grid(); }
  int dim() const noexcept { return static_cast<int>(components_.size()); }
  const ScalarField& operator[](int i) const { return components_[i]; }
  ScalarField& operator[](int i) { return components_[i]; }
  Point at(std::size_t node) const noexcept;

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);

  double max_abs() const;
  bool all_finite() const;

 private:
  std::vector<ScalarField> components_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// Nodewise d x d matrices, entry (i, j) = d/dx_j of component i when the
/// field holds a gradient.
class MatrixField {
 public:
  explicit MatrixField(const TorusGrid& grid);

  const TorusGrid& grid() const noexcept { return entries_.front().grid(); }
  int dim() const noexcept { return dim_; }
  const ScalarField& operator()(int i, int j) const { return entries_[i * dim_ + j]; }
  ScalarField& operator()(int i, int j) { return entries_[i * dim_ + j]; }

 private:
  int dim_;
  std::vector<ScalarField> entries_;
};

/// Pointwise |u|^2.
ScalarField squared_magnitude(const VectorField& u);
/// Pointwise dot product.
ScalarField dot(const VectorField& a, const VectorField& b);

/// L^p norms under the normalized measure dx/(2*pi)^d; vectors use the
/// pointwise Euclidean magnitude.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& u, double p);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& u);

/// ||a - b||_2 / max(||b||_2, 1e-300).
double relative_l2(const ScalarField& a, const ScalarField& b);
double relative_l2(const VectorField& a, const VectorField& b);

/// Throws InvalidArgument when the grids differ.
void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what);

}  // namespace lagflow
