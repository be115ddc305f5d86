#pragma once

#include <complex>
#include <vector>

#include "lagflow/field.hpp"

namespace lagflow {

/// Normalized Fourier coefficients in the real-to-complex layout of the grid:
/// f(x) = sum_k c_k exp(i k.x), with the conjugate half implied.
struct Spectrum {
  TorusGrid grid;
  std::vector<std::complex<double>> coeffs;
};

Spectrum to_spectrum(const ScalarField& f);
ScalarField from_spectrum(const Spectrum& s);

/// Multiplies every coefficient by fn(k, nyquist) and transforms back.
/// `fn` receives the signed wavenumbers and per-axis Nyquist flags.
template <class Fn>
ScalarField apply_multiplier(const ScalarField& f, Fn&& fn) {
  Spectrum s = to_spectrum(f);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i)
    s.coeffs[i] *= fn(s.grid.mode(i), s.grid.nyquist(i));
  return from_spectrum(s);
}

/// Spectral d/dx_axis; the Nyquist derivative coefficient is zero.
ScalarField partial(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);

/// (I - Laplacian)^(beta/2): coefficient k scaled by (1 + |k|^2)^(beta/2).
ScalarField bessel_apply(const ScalarField& f, double beta);
VectorField bessel_apply(const VectorField& u, double beta);

/// ||(I - Laplacian)^(beta/2) f||_{L^p} under the normalized measure, by
/// nodewise quadrature. Throws for p <= 1.
double bessel_norm(const ScalarField& f, double beta, double p);
double bessel_norm(const VectorField& u, double beta, double p);

/// Heat semigroup S^eps: coefficient k scaled by exp(-eps |k|^2).
/// Throws for eps < 0.
ScalarField heat_smooth(const ScalarField& f, double eps);
VectorField heat_smooth(const VectorField& u, double eps);

/// max over resolved modes of 1 - exp(-eps |k|^2): the H^beta_2 operator norm
/// of S^eps - Id restricted to the grid (independent of beta, since the
/// multipliers commute). Throws for eps < 0.
double smoothing_gap(double beta, double eps, const TorusGrid& grid);

/// 2/3-rule projection: zeroes every mode with some |k_i| > grid.dealias_cutoff().
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& u);

/// Fraction sqrt(E_hi / E) of the gradient energy sum |k|^2 |c_k|^2 of u held
/// by modes with max_i |k_i| above half the dealiasing cutoff. Near zero for
/// resolved fields; approaches one as gradients steepen to the grid scale.
double resolution_indicator(const VectorField& u);

inline constexpr double kDefaultResolutionThreshold = 0.25;

/// dealias(a * b).
ScalarField dealiased_product(const ScalarField& a, const ScalarField& b);

}  // namespace lagflow
