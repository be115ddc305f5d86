#include "lagflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lagflow/error.hpp"

namespace lagflow {

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what) {
  if (!(a == b))
    fail(ErrorKind::InvalidArgument, std::string(what) + ": fields live on different grids");
}

ScalarField::ScalarField(TorusGrid grid, double value)
    : grid_(std::move(grid)), values_(grid_.size(), value) {}

ScalarField::ScalarField(TorusGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require(values_.size() == grid_.size(), "ScalarField: value count must equal n^d");
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField *=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::operator+=(double s) {
  for (auto& v : values_) v += s;
  return *this;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField operator-(ScalarField a) { return a *= -1.0; }

VectorField::VectorField(const TorusGrid& grid, double value)
    : components_(static_cast<std::size_t>(grid.dim()), ScalarField(grid, value)) {}

VectorField::VectorField(std::vector<ScalarField> components)
    : components_(std::move(components)) {
  require(!components_.empty(), "VectorField: needs at least one component");
  const auto& g = components_.front().grid();
  require(static_cast<int>(components_.size()) == g.dim(),
          "VectorField: component count must equal the grid dimension");
  for (const auto& c : components_) require_same_grid(g, c.grid(), "VectorField");
}

Point VectorField::at(std::size_t node) const noexcept {
  Point p{0.0, 0.0};
  for (int i = 0; i < dim(); ++i) p[i] = components_[i][node];
  return p;
}

VectorField& VectorField::operator+=(const VectorField& other) {
  for (int i = 0; i < dim(); ++i) components_[i] += other.components_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  for (int i = 0; i < dim(); ++i) components_[i] -= other.components_[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : components_) c *= s;
  return *this;
}

double VectorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.max_abs());
  return m;
}

bool VectorField::all_finite() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const ScalarField& c) { return c.all_finite(); });
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

MatrixField::MatrixField(const TorusGrid& grid)
    : dim_(grid.dim()),
      entries_(static_cast<std::size_t>(grid.dim() * grid.dim()), ScalarField(grid)) {}

ScalarField squared_magnitude(const VectorField& u) { return dot(u, u); }

ScalarField dot(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "dot");
  ScalarField out(a.grid());
  for (int c = 0; c < a.dim(); ++c)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a[c][i] * b[c][i];
  return out;
}

double lp_norm(const ScalarField& f, double p) {
  require(p > 1.0 || p == 1.0 || std::isinf(p), "lp_norm: p must be >= 1");
  if (std::isinf(p)) return f.max_abs();
  double s = 0.0;
  for (double v : f.values()) s += std::pow(std::abs(v), p);
  return std::pow(s / static_cast<double>(f.size()), 1.0 / p);
}

double lp_norm(const VectorField& u, double p) {
  if (u.dim() == 1) return lp_norm(u[0], p);
  ScalarField mag = squared_magnitude(u);
  for (auto& v : mag.values()) v = std::sqrt(v);
  return lp_norm(mag, p);
}

double l2_norm(const ScalarField& f) { return lp_norm(f, 2.0); }
double l2_norm(const VectorField& u) { return lp_norm(u, 2.0); }

double relative_l2(const ScalarField& a, const ScalarField& b) {
  return l2_norm(a - b) / std::max(l2_norm(b), std::numeric_limits<double>::min());
}

double relative_l2(const VectorField& a, const VectorField& b) {
  return l2_norm(a - b) / std::max(l2_norm(b), std::numeric_limits<double>::min());
}

}  // namespace lagflow
