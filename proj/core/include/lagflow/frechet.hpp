#pragma once

#include <functional>

#include "lagflow/field.hpp"
#include "lagflow/flow.hpp"

namespace lagflow {

struct RelativeError {
  double l2 = 0.0;
  double max = 0.0;
};

struct LinearizationResult {
  VectorField analytic;
  VectorField finite_diff;
  double delta = 0.0;
  RelativeError rel_error;
};

inline constexpr double kRelativeErrorFloor = 1e-14;

/// ||a - b|| / max(||a||, 1e-14) in the L^2 and max norms.
RelativeError relative_error(const VectorField& analytic, const VectorField& approx);

LinearizationResult compare_linearization(VectorField analytic, VectorField finite_diff,
                                          double delta);

/// Derivative of the time-t forward flow of the steady velocity u0 + u with
/// respect to u at u = 0, in the steady direction w. Solves the variational
/// system dX/ds = u0(X), dM/ds = grad u0(X) M + w(X), M(0) = 0, along the
/// characteristic from every node with RK4 in steps no longer than dt.
VectorField flow_frechet_at_zero(const VectorField& u0, const VectorField& w, double t,
                                 double dt, Interpolation method = Interpolation::Spectral);

/// Derivative of the back-to-labels map: -(grad A_t) (M o A_t), where M is
/// flow_frechet_at_zero and A_t the back-to-labels map of u0.
VectorField labels_frechet_at_zero(const VectorField& u0, const VectorField& w, double t,
                                   double dt, Interpolation method = Interpolation::Spectral);

/// d = 1 only: exp(int_0^t u0'(X_s) ds) * int_0^t w(X_s) ds along the
/// characteristics of u0.
VectorField flow_frechet_exponential_1d(const VectorField& u0, const VectorField& w, double t,
                                        double dt, Interpolation method = Interpolation::Spectral);

using FieldFunctional = std::function<VectorField(const VectorField&)>;

/// (map(base + delta w) - map(base - delta w)) / (2 delta). Throws for delta = 0.
VectorField fd_gateaux(const FieldFunctional& map, const VectorField& base, const VectorField& w,
                       double delta);

/// Nodewise displacement difference of two maps, each component reduced to (-pi, pi].
VectorField map_difference(const FlowMap& a, const FlowMap& b);

/// Forward flow X_t of the steady velocity u from every node.
FlowMap steady_flow(const VectorField& u, double t, double dt,
                    Interpolation method = Interpolation::Spectral);

/// Back-to-labels map A_t of the steady velocity u.
FlowMap steady_labels(const VectorField& u, double t, double dt,
                      Interpolation method = Interpolation::Spectral);

}  // namespace lagflow
