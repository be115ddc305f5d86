#pragma once

#include <functional>
#include <vector>

#include "lagflow/field.hpp"
#include "lagflow/flow.hpp"
#include "lagflow/spectral.hpp"
#include "lagflow/thermo.hpp"

namespace lagflow {

/// Primitive-variable state (rho, u) of the isentropic Euler system.
struct EulerState {
  double t = 0.0;
  ScalarField rho;
  VectorField u;
};

struct EulerRhs {
  ScalarField drho;
  VectorField du;
};

/// drho = -(u.grad) rho - rho div u,  du = -(u.grad) u - grad h(rho), every
/// pointwise product dealiased. Throws Vacuum below rho_min.
EulerRhs euler_rhs(const EulerState& state, const PressureLaw& law);

struct ReferenceOptions {
  /// Halt once max|grad u| * dt exceeds this value.
  double blowup_threshold = 0.1;
  /// Halt once resolution_indicator(u) exceeds this value.
  double resolution_threshold = kDefaultResolutionThreshold;
  bool enforce_cfl = true;
};

/// Largest stable step 0.5 * spacing / (max|u| + max c(rho)).
double cfl_limit(const EulerState& state, const PressureLaw& law);

/// Classical RK4 method of lines from state0.t to T. `observer` sees every
/// accepted state including the initial one. Throws CflViolation, Blowup or
/// Vacuum (stamped with the failing time) instead of producing non-finite
/// output.
void rk4_march(const EulerState& state0, const PressureLaw& law, double T, double dt,
               const std::function<void(const EulerState&)>& observer,
               const ReferenceOptions& options = {});

/// Convenience wrapper returning every accepted state.
std::vector<EulerState> rk4_solve(const EulerState& state0, const PressureLaw& law, double T,
                                  double dt, const ReferenceOptions& options = {});

/// Pseudo-spectral RK4 solution of f_t + (u.grad) f = 0 on [0, T], with u
/// taken from the history (linear in time).
ScalarField advect_solve(const VelocityHistory& u, const ScalarField& f0, double T, double dt);

}  // namespace lagflow
