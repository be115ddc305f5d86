#include "lagflow/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lagflow/error.hpp"
#include "lagflow/spectral.hpp"

namespace lagflow {

namespace {

void require_finite(const VectorField& f, const char* what) {
  if (!f.all_finite()) fail(ErrorKind::InvalidArgument, std::string(what) + " has non-finite values");
}

// Integrates dy/ds = rhs(y) from s = 0 to t with classical RK4 at every node.
// The first d entries of y are the position; `rhs` writes the derivative of
// the full augmented state given the state.
template <class Rhs>
std::vector<std::vector<double>> integrate_augmented(const TorusGrid& grid, std::size_t width,
                                                     double t, double dt, Rhs&& rhs) {
  require(dt > 0.0, "dt must be positive");
  require(t >= 0.0, "t must be non-negative");
  const long steps = t == 0.0 ? 0 : static_cast<long>(std::ceil(t / dt - 1e-9));
  const double h = steps == 0 ? 0.0 : t / steps;
  const int d = grid.dim();
  std::vector<std::vector<double>> out(grid.size(), std::vector<double>(width, 0.0));
  std::vector<double> y(width), k1(width), k2(width), k3(width), k4(width), tmp(width);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::fill(y.begin(), y.end(), 0.0);
    const Point x = grid.node(i);
    for (int c = 0; c < d; ++c) y[c] = x[c];
    for (long s = 0; s < steps; ++s) {
      rhs(y, k1);
      for (std::size_t j = 0; j < width; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
      rhs(tmp, k2);
      for (std::size_t j = 0; j < width; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
      rhs(tmp, k3);
      for (std::size_t j = 0; j < width; ++j) tmp[j] = y[j] + h * k3[j];
      rhs(tmp, k4);
      for (std::size_t j = 0; j < width; ++j)
        y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    out[i] = y;
  }
  return out;
}

Point position(const std::vector<double>& y, int d) {
  Point p{0.0, 0.0};
  for (int c = 0; c < d; ++c) p[c] = y[c];
  return p;
}

}  // namespace

RelativeError relative_error(const VectorField& analytic, const VectorField& approx) {
  const VectorField diff = analytic - approx;
  return RelativeError{l2_norm(diff) / std::max(l2_norm(analytic), kRelativeErrorFloor),
                       diff.max_abs() / std::max(analytic.max_abs(), kRelativeErrorFloor)};
}

LinearizationResult compare_linearization(VectorField analytic, VectorField finite_diff,
                                          double delta) {
  const RelativeError err = relative_error(analytic, finite_diff);
  return LinearizationResult{std::move(analytic), std::move(finite_diff), delta, err};
}

VectorField flow_frechet_at_zero(const VectorField& u0, const VectorField& w, double t,
                                 double dt, Interpolation method) {
  require_same_grid(u0.grid(), w.grid(), "flow_frechet_at_zero");
  require_finite(u0, "u0");
  require_finite(w, "w");
  const auto& grid = u0.grid();
  const int d = grid.dim();

  // Interpolated fields: u0 (d), grad u0 (d*d, row-major), w (d).
  std::vector<ScalarField> fields;
  for (int i = 0; i < d; ++i) fields.push_back(u0[i]);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) fields.push_back(partial(u0[i], j));
  for (int i = 0; i < d; ++i) fields.push_back(w[i]);
  const PeriodicInterpolant interp(std::move(fields), method);
  std::vector<double> vals(interp.field_count());

  const std::size_t width = 2 * static_cast<std::size_t>(d);
  auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
    interp.eval(position(y, d), vals);
    for (int i = 0; i < d; ++i) {
      dy[i] = vals[i];
      double m = vals[d + d * d + i];
      for (int j = 0; j < d; ++j) m += vals[d + i * d + j] * y[d + j];
      dy[d + i] = m;
    }
  };
  const auto states = integrate_augmented(grid, width, t, dt, rhs);
  VectorField out(grid);
  for (std::size_t n = 0; n < grid.size(); ++n)
    for (int i = 0; i < d; ++i) out[i][n] = states[n][d + i];
  return out;
}

VectorField labels_frechet_at_zero(const VectorField& u0, const VectorField& w, double t,
                                   double dt, Interpolation method) {
  const VectorField m = flow_frechet_at_zero(u0, w, t, dt, method);
  const FlowMap a = steady_labels(u0, t, dt, method);
  const MatrixField ga = grad_map(a);
  const VectorField m_at_a = compose(m, a, method);
  const int d = u0.grid().dim();
  VectorField out(u0.grid());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (std::size_t n = 0; n < out[i].size(); ++n) out[i][n] -= ga(i, j)[n] * m_at_a[j][n];
  return out;
}

VectorField flow_frechet_exponential_1d(const VectorField& u0, const VectorField& w, double t,
                                        double dt, Interpolation method) {
  require_same_grid(u0.grid(), w.grid(), "flow_frechet_exponential_1d");
  require(u0.grid().dim() == 1, "flow_frechet_exponential_1d requires d = 1");
  require_finite(u0, "u0");
  require_finite(w, "w");
  const auto& grid = u0.grid();
  const PeriodicInterpolant interp({u0[0], partial(u0[0], 0), w[0]}, method);
  std::vector<double> vals(3);
  auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
    interp.eval(Point{y[0], 0.0}, vals);
    dy[0] = vals[0];
    dy[1] = vals[1];
    dy[2] = vals[2];
  };
  const auto states = integrate_augmented(grid, 3, t, dt, rhs);
  VectorField out(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) out[0][n] = std::exp(states[n][1]) * states[n][2];
  return out;
}

VectorField fd_gateaux(const FieldFunctional& map, const VectorField& base, const VectorField& w,
                       double delta) {
  require(delta != 0.0 && std::isfinite(delta), "fd_gateaux: delta must be finite and nonzero");
  require_same_grid(base.grid(), w.grid(), "fd_gateaux");
  VectorField plus = map(base + delta * w);
  const VectorField minus = map(base - delta * w);
  plus -= minus;
  plus *= 1.0 / (2.0 * delta);
  return plus;
}

VectorField map_difference(const FlowMap& a, const FlowMap& b) {
  require_same_grid(a.grid(), b.grid(), "map_difference");
  const int d = a.grid().dim();
  VectorField out(a.grid());
  const VectorField& da = a.displacement();
  const VectorField& db = b.displacement();
  for (std::size_t n = 0; n < a.grid().size(); ++n)
    for (int c = 0; c < d; ++c) out[c][n] = wrap_angle(da[c][n] - db[c][n]);
  return out;
}

FlowMap steady_flow(const VectorField& u, double t, double dt, Interpolation method) {
  if (t == 0.0) return FlowMap::identity(u.grid());
  return advance_flow(VelocityHistory::steady(u, 0.0, t), 0.0, t, u.grid(), dt, {method, 0.0});
}

FlowMap steady_labels(const VectorField& u, double t, double dt, Interpolation method) {
  if (t == 0.0) return FlowMap::identity(u.grid());
  return back_to_labels(VelocityHistory::steady(u, 0.0, t), t, u.grid(), dt, {method, 0.0});
}

}  // namespace lagflow
