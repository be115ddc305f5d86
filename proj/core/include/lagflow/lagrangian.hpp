#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "lagflow/field.hpp"
#include "lagflow/flow.hpp"
#include "lagflow/thermo.hpp"

namespace lagflow {

enum class PicardMode {
  Stepwise,  // fixed point per time step (default)
  Global,    // experimental: one fixed point for the whole trajectory on [0, T]
};

struct PicardConfig {
  double dt = 1e-3;
  double picard_tol = 1e-10;
  int max_iters = 50;
  /// Heat smoothing of the flow velocity during the first Picard sweeps;
  /// unset means (2 pi / n)^2 / 4.
  std::optional<double> epsilon;
  /// Relaxation theta in (0, 1]; halved whenever an increment grows.
  double damping = 1.0;
  /// Norm indices for increments and diagnostics; unset beta means d/p + 1.5.
  std::optional<double> beta;
  double p = 2.0;
  /// Reject configurations with beta <= d/p + 1.
  bool enforce_norm_hypothesis = false;
  Interpolation interpolation = Interpolation::Spectral;
  double fold_floor = 1e-8;
  /// Halt once max|grad u| * dt exceeds this value.
  double blowup_threshold = 0.1;
  /// Halt once resolution_indicator(u) exceeds this value.
  double resolution_threshold = 0.25;
  PicardMode mode = PicardMode::Stepwise;

  double epsilon_for(const TorusGrid& grid) const;
  double beta_for(const TorusGrid& grid) const;
  /// Throws Validation listing every violated constraint.
  void validate(const TorusGrid& grid) const;
};

/// Label-coordinate bookkeeping carried between steps: the back-to-labels
/// map, the two enthalpy/kinetic integrals along characteristics, and the
/// Eulerian fields they were accumulated from.
struct LabelTransport {
  double t = 0.0;
  FlowMap labels;
  ScalarField rho;
  ScalarField q_h;      // int_0^t H along characteristics
  ScalarField q_k;      // int_0^t K along characteristics
  ScalarField h_field;  // H(t) = h(rho(t))
  ScalarField k_field;  // K(t) = |u(t)|^2 / 2
  VectorField flow_velocity;
};

struct LagrangianState {
  double t = 0.0;
  VectorField u;
  ScalarField rho;
  ScalarField q;  // q_h - q_k, so that D_t q = H - K
  FlowMap A;
  VectorField v;  // u0 o A
  LabelTransport transport;
  VectorField last_increment;  // u(t) - u(t - dt); zero at t = 0
};

/// State at t = 0: A = id, q = 0, v = u = u0, rho = rho0.
LagrangianState initial_state(const ScalarField& rho0, const VectorField& u0,
                              const PressureLaw& law);

/// v = u0 o A.
VectorField virtual_velocity(const VectorField& u0, const FlowMap& A,
                             Interpolation method = Interpolation::Spectral);

/// rho = J(A) * (rho0 o A).
ScalarField density_from_labels(const ScalarField& rho0, const FlowMap& A,
                                Interpolation method = Interpolation::Spectral,
                                double fold_floor = 1e-8);

/// Integrates D_t q = integrand along characteristics with q(0) = 0.
/// `integrand[j]` is sampled at flows.times()[j]; each node is traced back
/// one stored step at a time and the composite trapezoid rule is applied.
/// The history must start at t = 0 and `t` must be one of its times.
ScalarField accumulate_q(const VelocityHistory& flows, const std::vector<ScalarField>& integrand,
                         double t, Interpolation method = Interpolation::Spectral);

/// u = (grad A)^T (u0 o A) - grad q.
VectorField reconstruct_velocity(const VectorField& u0, const FlowMap& A, const ScalarField& q,
                                 Interpolation method = Interpolation::Spectral);

struct TransportOptions {
  Interpolation interpolation = Interpolation::Spectral;
  double fold_floor = 1e-8;
};

LabelTransport initial_transport(const ScalarField& rho0, const VectorField& u0,
                                 const PressureLaw& law);

/// Advances the label bookkeeping from prev.t to t_next, the flow being
/// generated by prev.flow_velocity and `flow_velocity` (linear in time).
LabelTransport advance_transport(const LabelTransport& prev, const VectorField& flow_velocity,
                                 double t_next, const ScalarField& rho0, const PressureLaw& law,
                                 const TransportOptions& options = {});

/// Right-hand side of the velocity reconstruction for a transport state.
VectorField reconstruct_from_transport(const VectorField& u0, const LabelTransport& transport,
                                       Interpolation method = Interpolation::Spectral);

/// u0 + S^eps (u - u0).
VectorField regularize(const VectorField& u, const VectorField& u0, double eps);

/// Fixed-point residual at time t for a velocity history starting at 0:
/// u(t) - [(grad A_t)^T u0(A_t) - grad int_0^t H + grad int_0^t K], all
/// flows generated by the history. Vanishes exactly on solutions.
VectorField residual_F(double t, const VelocityHistory& u_hist, const ScalarField& rho0,
                       const VectorField& u0, const PressureLaw& law,
                       const TransportOptions& options = {});

/// residual_F evaluated on u0 + S^eps(u - u0) for every history sample.
VectorField regularized_residual(double t, const VelocityHistory& u_hist,
                                 const ScalarField& rho0, const VectorField& u0,
                                 const PressureLaw& law, double eps,
                                 const TransportOptions& options = {});

struct StepReport {
  int iterations = 0;
  std::vector<double> increments;  // H^beta norms of successive differences
  double residual_norm = 0.0;      // H^beta norm of residual_F at the accepted velocity
  double damping = 1.0;            // relaxation in force at convergence
  double min_det = 1.0;
};

struct StepResult {
  LagrangianState state;
  StepReport report;
};

/// One time step of relaxed Picard iteration on the velocity reconstruction.
/// Throws NoConvergence after cfg.max_iters; Folding/Vacuum propagate. All
/// errors carry the target time.
StepResult picard_step(const LagrangianState& state, const PicardConfig& cfg,
                       const ScalarField& rho0, const VectorField& u0, const PressureLaw& law);

struct Diagnostics {
  double t = 0.0;
  double mass = 0.0;  // integral of rho under the normalized measure
  double rho_norm = 0.0;
  double u_norm = 0.0;
  double residual = 0.0;
  double min_rho = 0.0;
  double min_det = 1.0;
  int iterations = 0;
};

Diagnostics diagnose(const LagrangianState& state, const StepReport& report,
                     const PicardConfig& cfg);

struct SolveResult {
  std::vector<LagrangianState> states;
  std::vector<Diagnostics> diagnostics;
  std::vector<StepReport> reports;
};

using LagrangianObserver = std::function<void(const LagrangianState&, const Diagnostics&)>;

/// Marches from t = 0 to T. Every accepted state is passed to `observer`;
/// states are retained in the result only when `keep_states` is set.
/// Errors propagate stamped with the failing time.
SolveResult solve(const ScalarField& rho0, const VectorField& u0, const PressureLaw& law,
                  double T, const PicardConfig& cfg, const LagrangianObserver& observer = {},
                  bool keep_states = true);

}  // namespace lagflow
