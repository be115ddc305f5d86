#include "lagflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lagflow/error.hpp"
#include "lagflow/spectral.hpp"

namespace lagflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

VectorField normalize_shift(VectorField d) {
  for (int c = 0; c < d.dim(); ++c) {
    const double mean = d[c].mean();
    double shift = kTwoPi * std::round(mean / kTwoPi);
    if (mean - shift <= -std::numbers::pi) shift -= kTwoPi;
    if (shift != 0.0) d[c] += -shift;
  }
  return d;
}

// Prepared interpolants for every history sample, blended on demand.
class HistorySampler {
 public:
  HistorySampler(const VelocityHistory& u, Interpolation method) : history_(u) {
    for (const auto& f : u.fields()) samples_.emplace_back(f, method);
  }

  PeriodicInterpolant at(double t) const {
    const auto& ts = history_.times();
    if (ts.size() == 1) return samples_.front();
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    hi = std::clamp<std::size_t>(hi, 1, ts.size() - 1);
    const std::size_t lo = hi - 1;
    const double lambda = std::clamp((t - ts[lo]) / (ts[hi] - ts[lo]), 0.0, 1.0);
    if (lambda == 0.0) return samples_[lo];
    if (lambda == 1.0) return samples_[hi];
    return PeriodicInterpolant::blend(samples_[lo], samples_[hi], lambda);
  }

 private:
  const VelocityHistory& history_;
  std::vector<PeriodicInterpolant> samples_;
};

void check_velocity(const VelocityHistory& u) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!u.fields()[i].all_finite()) {
      std::ostringstream os;
      os << "non-finite velocity sample at t=" << u.times()[i];
      fail(ErrorKind::Blowup, os.str());
    }
  }
}

void check_folding(const FlowMap& m, double floor) { (void)jacobian(m, floor); }

}  // namespace

FlowMap::FlowMap(VectorField displacement, double time)
    : displacement_(normalize_shift(std::move(displacement))), time_(time) {}

FlowMap FlowMap::identity(const TorusGrid& grid, double time) {
  return FlowMap(VectorField(grid), time);
}

Point FlowMap::image(std::size_t node) const noexcept {
  Point p = grid().node(node);
  for (int c = 0; c < displacement_.dim(); ++c) p[c] += displacement_[c][node];
  return p;
}

VelocityHistory::VelocityHistory(std::vector<double> times, std::vector<VectorField> fields)
    : times_(std::move(times)), fields_(std::move(fields)) {
  require(!times_.empty(), "VelocityHistory: needs at least one sample");
  require(times_.size() == fields_.size(), "VelocityHistory: one field per time");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    require(times_[i] > times_[i - 1], "VelocityHistory: times must be strictly increasing");
    require_same_grid(fields_[0].grid(), fields_[i].grid(), "VelocityHistory");
  }
}

VelocityHistory VelocityHistory::steady(const VectorField& u, double t0, double t1) {
  if (t1 == t0) return VelocityHistory({t0}, {u});
  return VelocityHistory({std::min(t0, t1), std::max(t0, t1)}, {u, u});
}

void VelocityHistory::append(double t, VectorField u) {
  require(t > times_.back(), "VelocityHistory::append: times must be strictly increasing");
  require_same_grid(grid(), u.grid(), "VelocityHistory::append");
  times_.push_back(t);
  fields_.push_back(std::move(u));
}

bool VelocityHistory::covers(double t0, double t1) const noexcept {
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  const double slack = 1e-12 * std::max(1.0, std::abs(end()));
  return lo >= start() - slack && hi <= end() + slack;
}

VectorField VelocityHistory::at(double t) const {
  if (!covers(t, t)) {
    std::ostringstream os;
    os << "velocity history [" << start() << ", " << end() << "] does not cover t=" << t;
    fail(ErrorKind::HistoryGap, os.str());
  }
  if (times_.size() == 1) return fields_.front();
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - times_.begin()), 1,
                                           times_.size() - 1);
  const std::size_t lo = hi - 1;
  const double lambda = std::clamp((t - times_[lo]) / (times_[hi] - times_[lo]), 0.0, 1.0);
  return (1.0 - lambda) * fields_[lo] + lambda * fields_[hi];
}

FlowMap trace_characteristics(const VelocityHistory& u, double t_from, double t_to, double dt,
                              const FlowOptions& options) {
  require(dt > 0.0, "trace_characteristics: dt must be positive");
  if (!u.covers(t_from, t_to)) {
    std::ostringstream os;
    os << "velocity history [" << u.start() << ", " << u.end() << "] does not cover ["
       << std::min(t_from, t_to) << ", " << std::max(t_from, t_to) << "]";
    fail(ErrorKind::HistoryGap, os.str());
  }
  check_velocity(u);
  const TorusGrid& grid = u.grid();
  const int d = grid.dim();
  const std::size_t nodes = grid.size();

  // Integrate displacements so small motions keep their relative precision.
  std::vector<Point> disp(nodes, Point{0.0, 0.0});

  const double span = t_to - t_from;
  const auto steps = static_cast<long>(std::ceil(std::abs(span) / dt - 1e-9));
  if (steps > 0) {
    const HistorySampler sampler(u, options.interpolation);
    const double h = span / static_cast<double>(steps);
    std::vector<Point> k1(nodes), k2(nodes), k3(nodes), k4(nodes);
    auto stage = [&](const PeriodicInterpolant& vel, const std::vector<Point>& base,
                     const std::vector<Point>* slope, double scale, std::vector<Point>& out) {
      for (std::size_t i = 0; i < nodes; ++i) {
        Point x = grid.node(i);
        for (int c = 0; c < d; ++c) x[c] += base[i][c];
        if (slope)
          for (int c = 0; c < d; ++c) x[c] += scale * (*slope)[i][c];
        vel.eval(x, std::span<double>(out[i].data(), static_cast<std::size_t>(d)));
      }
    };
    for (long s = 0; s < steps; ++s) {
      const double t = t_from + static_cast<double>(s) * h;
      const PeriodicInterpolant v0 = sampler.at(t);
      const PeriodicInterpolant vm = sampler.at(t + 0.5 * h);
      const PeriodicInterpolant v1 = sampler.at(s + 1 == steps ? t_to : t + h);
      stage(v0, disp, nullptr, 0.0, k1);
      stage(vm, disp, &k1, 0.5 * h, k2);
      stage(vm, disp, &k2, 0.5 * h, k3);
      stage(v1, disp, &k3, h, k4);
      for (std::size_t i = 0; i < nodes; ++i)
        for (int c = 0; c < d; ++c)
          disp[i][c] += h / 6.0 * (k1[i][c] + 2.0 * k2[i][c] + 2.0 * k3[i][c] + k4[i][c]);
    }
  }

  VectorField out(grid);
  for (std::size_t i = 0; i < nodes; ++i)
    for (int c = 0; c < d; ++c) out[c][i] = disp[i][c];
  if (!out.all_finite()) fail(ErrorKind::Blowup, "characteristics left the finite range");
  return FlowMap(std::move(out), t_to);
}

FlowMap advance_flow(const VelocityHistory& u, double t0, double t1, const TorusGrid& grid,
                     double dt, const FlowOptions& options) {
  require_same_grid(grid, u.grid(), "advance_flow");
  FlowMap m = trace_characteristics(u, t0, t1, dt, options);
  check_folding(m, options.fold_floor);
  return m;
}

FlowMap back_to_labels(const VelocityHistory& u, double t, const TorusGrid& grid, double dt,
                       const FlowOptions& options) {
  require_same_grid(grid, u.grid(), "back_to_labels");
  FlowMap traced = trace_characteristics(u, t, 0.0, dt, options);
  FlowMap m(traced.displacement(), t);
  check_folding(m, options.fold_floor);
  return m;
}

MatrixField grad_map(const FlowMap& m) {
  const auto& d = m.displacement();
  MatrixField g(m.grid());
  for (int i = 0; i < d.dim(); ++i) {
    for (int j = 0; j < d.dim(); ++j) {
      g(i, j) = partial(d[i], j);
      if (i == j) g(i, j) += 1.0;
    }
  }
  return g;
}

ScalarField determinant(const MatrixField& g) {
  if (g.dim() == 1) return g(0, 0);
  return g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
}

ScalarField jacobian(const FlowMap& m, double fold_floor) {
  ScalarField det = determinant(grad_map(m));
  const double lowest = det.min();
  if (!(lowest > fold_floor)) {
    std::ostringstream os;
    os << "map folding: Jacobian determinant reached " << lowest;
    throw Error(ErrorKind::Folding, os.str(), m.time());
  }
  return det;
}

bool FlowMap::is_identity() const noexcept {
  for (int c = 0; c < displacement_.dim(); ++c)
    for (double v : displacement_[c].values())
      if (v != 0.0) return false;
  return true;
}

ScalarField compose(const ScalarField& f, const FlowMap& m, Interpolation method) {
  require_same_grid(f.grid(), m.grid(), "compose");
  if (m.is_identity()) return f;
  const PeriodicInterpolant interp(f, method);
  ScalarField out(f.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = interp.eval(m.image(i));
  return out;
}

VectorField compose(const VectorField& f, const FlowMap& m, Interpolation method) {
  require_same_grid(f.grid(), m.grid(), "compose");
  if (m.is_identity()) return f;
  const PeriodicInterpolant interp(f, method);
  VectorField out(f.grid());
  std::array<double, 2> v{};
  const auto d = static_cast<std::size_t>(f.dim());
  for (std::size_t i = 0; i < f.grid().size(); ++i) {
    interp.eval(m.image(i), std::span<double>(v.data(), d));
    for (int c = 0; c < f.dim(); ++c) out[c][i] = v[c];
  }
  return out;
}

FlowMap compose(const FlowMap& outer, const FlowMap& inner, Interpolation method) {
  VectorField d = inner.displacement() + compose(outer.displacement(), inner, method);
  return FlowMap(std::move(d), outer.time());
}

VectorField transpose_apply(const MatrixField& g, const VectorField& v) {
  require_same_grid(g.grid(), v.grid(), "transpose_apply");
  VectorField out(v.grid());
  for (int j = 0; j < v.dim(); ++j)
    for (int i = 0; i < v.dim(); ++i) out[j] += g(i, j) * v[i];
  return out;
}

VectorField pushforward_covector(const FlowMap& m, const VectorField& v) {
  return transpose_apply(grad_map(m), v);
}

double wrap_angle(double a) noexcept {
  double r = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

double max_map_distance(const FlowMap& a, const FlowMap& b) {
  require_same_grid(a.grid(), b.grid(), "max_map_distance");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.grid().size(); ++i) {
    const Point pa = a.image(i), pb = b.image(i);
    double s = 0.0;
    for (int c = 0; c < a.grid().dim(); ++c) {
      const double diff = wrap_angle(pa[c] - pb[c]);
      s += diff * diff;
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace lagflow
