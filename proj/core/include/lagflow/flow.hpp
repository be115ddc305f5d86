#pragma once

#include <vector>

#include "lagflow/field.hpp"
#include "lagflow/interpolation.hpp"

namespace lagflow {

/// Diffeomorphism of the torus stored as x -> x + displacement(x).
///
/// The displacement is kept continuous (never wrapped node by node) so that
/// it stays periodic and spectrally differentiable; only a uniform multiple
/// of 2*pi per component is removed so the mean displacement lies in
/// (-pi, pi].
class FlowMap {
 public:
  FlowMap(VectorField displacement, double time);
  static FlowMap identity(const TorusGrid& grid, double time = 0.0);

  const TorusGrid& grid() const noexcept { return displacement_.grid(); }
  const VectorField& displacement() const noexcept { return displacement_; }
  double time() const noexcept { return time_; }

  /// True when every displacement sample is exactly zero.
  bool is_identity() const noexcept;

  /// Image of grid node `node` (not reduced mod 2*pi).
  Point image(std::size_t node) const noexcept;

 private:
  VectorField displacement_;
  double time_;
};

/// Samples u(t_0), ..., u(t_M) of a time-dependent velocity; evaluated
/// between samples by linear interpolation in time.
class VelocityHistory {
 public:
  VelocityHistory(std::vector<double> times, std::vector<VectorField> fields);
  /// Time-constant velocity on [t0, t1].
  static VelocityHistory steady(const VectorField& u, double t0, double t1);

  void append(double t, VectorField u);

  const TorusGrid& grid() const noexcept { return fields_.front().grid(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<VectorField>& fields() const noexcept { return fields_; }
  double start() const noexcept { return times_.front(); }
  double end() const noexcept { return times_.back(); }
  std::size_t size() const noexcept { return times_.size(); }

  bool covers(double t0, double t1) const noexcept;
  /// Throws HistoryGap outside the covered range.
  VectorField at(double t) const;

 private:
  std::vector<double> times_;
  std::vector<VectorField> fields_;
};

struct FlowOptions {
  Interpolation interpolation = Interpolation::Spectral;
  /// Determinants at or below this value abort with a Folding error.
  double fold_floor = 1e-8;
};

/// Positions at time `t_to` of the characteristics dY/ds = u(s, Y) that pass
/// through the grid nodes at time `t_from`, integrated with classical RK4 in
/// steps no longer than `dt`. Works in either time direction. Returns the
/// resulting map x -> Y(t_to; x) stamped with time `t_to`.
FlowMap trace_characteristics(const VelocityHistory& u, double t_from, double t_to,
                              double dt, const FlowOptions& options = {});

/// Forward flow X: label a at t0 -> position at t1.
FlowMap advance_flow(const VelocityHistory& u, double t0, double t1, const TorusGrid& grid,
                     double dt, const FlowOptions& options = {});

/// Back-to-labels map A_t: position at t -> label at time 0, by backward
/// characteristic tracing from every node.
FlowMap back_to_labels(const VelocityHistory& u, double t, const TorusGrid& grid, double dt,
                       const FlowOptions& options = {});

/// I + spectral gradient of the displacement; entry (i, j) = d m_i / d x_j.
MatrixField grad_map(const FlowMap& m);

/// Nodewise determinant of grad_map(m). Throws Folding if any value is at or
/// below `fold_floor`.
ScalarField jacobian(const FlowMap& m, double fold_floor = 1e-8);

/// Nodewise determinant without the folding check.
ScalarField determinant(const MatrixField& g);

/// f(m(x)) at every node.
ScalarField compose(const ScalarField& f, const FlowMap& m,
                    Interpolation method = Interpolation::Spectral);
VectorField compose(const VectorField& f, const FlowMap& m,
                    Interpolation method = Interpolation::Spectral);

/// outer o inner as a map.
FlowMap compose(const FlowMap& outer, const FlowMap& inner,
                Interpolation method = Interpolation::Spectral);

/// grad_map(m)^T v nodewise, i.e. (grad m)^* v.
VectorField pushforward_covector(const FlowMap& m, const VectorField& v);
VectorField transpose_apply(const MatrixField& g, const VectorField& v);

/// Angle reduced to (-pi, pi].
double wrap_angle(double a) noexcept;

/// Largest nodewise torus distance between the images of two maps.
double max_map_distance(const FlowMap& a, const FlowMap& b);

}  // namespace lagflow
