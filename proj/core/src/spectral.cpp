#include "lagflow/spectral.hpp"

#include <cmath>
#include <cstdlib>

#include "lagflow/error.hpp"
#include "lagflow/fft.hpp"

namespace lagflow {

namespace {

using cplx = std::complex<double>;

double k_squared(const std::array<int, 2>& k) {
  return double(k[0]) * k[0] + double(k[1]) * k[1];
}

template <class Fn>
VectorField map_components(const VectorField& u, Fn&& fn) {
  std::vector<ScalarField> out;
  out.reserve(static_cast<std::size_t>(u.dim()));
  for (int i = 0; i < u.dim(); ++i) out.push_back(fn(u[i]));
  return VectorField(std::move(out));
}

}  // namespace

Spectrum to_spectrum(const ScalarField& f) {
  const auto& g = f.grid();
  Spectrum s{g, std::vector<cplx>(g.spectral_size())};
  g.fft().forward(f.values(), s.coeffs);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& c : s.coeffs) c *= scale;
  return s;
}

ScalarField from_spectrum(const Spectrum& s) {
  std::vector<cplx> scratch = s.coeffs;
  ScalarField f(s.grid);
  s.grid.fft().inverse(scratch, f.values());
  return f;
}

ScalarField partial(const ScalarField& f, int axis) {
  require(axis >= 0 && axis < f.grid().dim(), "partial: axis out of range");
  return apply_multiplier(f, [axis](const std::array<int, 2>& k, const std::array<bool, 2>& nyq) {
    return nyq[axis] ? cplx(0.0) : cplx(0.0, k[axis]);
  });
}

VectorField gradient(const ScalarField& f) {
  std::vector<ScalarField> out;
  for (int i = 0; i < f.grid().dim(); ++i) out.push_back(partial(f, i));
  return VectorField(std::move(out));
}

ScalarField divergence(const VectorField& u) {
  // Sum in spectral space: one inverse transform.
  const auto& g = u.grid();
  Spectrum total{g, std::vector<cplx>(g.spectral_size())};
  for (int axis = 0; axis < u.dim(); ++axis) {
    Spectrum s = to_spectrum(u[axis]);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
      if (g.nyquist(i)[axis]) continue;
      total.coeffs[i] += cplx(0.0, g.mode(i)[axis]) * s.coeffs[i];
    }
  }
  return from_spectrum(total);
}

ScalarField bessel_apply(const ScalarField& f, double beta) {
  return apply_multiplier(f, [beta](const std::array<int, 2>& k, const std::array<bool, 2>&) {
    return cplx(std::pow(1.0 + k_squared(k), 0.5 * beta));
  });
}

VectorField bessel_apply(const VectorField& u, double beta) {
  return map_components(u, [beta](const ScalarField& c) { return bessel_apply(c, beta); });
}

double bessel_norm(const ScalarField& f, double beta, double p) {
  if (!(p > 1.0)) fail(ErrorKind::InvalidArgument, "bessel_norm: p must exceed 1");
  return lp_norm(bessel_apply(f, beta), p);
}

double bessel_norm(const VectorField& u, double beta, double p) {
  if (!(p > 1.0)) fail(ErrorKind::InvalidArgument, "bessel_norm: p must exceed 1");
  return lp_norm(bessel_apply(u, beta), p);
}

ScalarField heat_smooth(const ScalarField& f, double eps) {
  if (!(eps >= 0.0)) fail(ErrorKind::InvalidArgument, "heat_smooth: epsilon must be >= 0");
  if (eps == 0.0) return f;
  return apply_multiplier(f, [eps](const std::array<int, 2>& k, const std::array<bool, 2>&) {
    return cplx(std::exp(-eps * k_squared(k)));
  });
}

VectorField heat_smooth(const VectorField& u, double eps) {
  return map_components(u, [eps](const ScalarField& c) { return heat_smooth(c, eps); });
}

double smoothing_gap(double /*beta*/, double eps, const TorusGrid& grid) {
  if (!(eps >= 0.0)) fail(ErrorKind::InvalidArgument, "smoothing_gap: epsilon must be >= 0");
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.spectral_size(); ++i)
    worst = std::max(worst, -std::expm1(-eps * k_squared(grid.mode(i))));
  return worst;
}

ScalarField dealias(const ScalarField& f) {
  const int cutoff = f.grid().dealias_cutoff();
  return apply_multiplier(f, [cutoff](const std::array<int, 2>& k, const std::array<bool, 2>&) {
    return (std::abs(k[0]) > cutoff || std::abs(k[1]) > cutoff) ? cplx(0.0) : cplx(1.0);
  });
}

VectorField dealias(const VectorField& u) {
  return map_components(u, [](const ScalarField& c) { return dealias(c); });
}

double resolution_indicator(const VectorField& u) {
  double high = 0.0;
  double total = 0.0;
  for (int c = 0; c < u.dim(); ++c) {
    const Spectrum s = to_spectrum(u[c]);
    const int half_band = s.grid.dealias_cutoff() / 2;
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
      const auto k = s.grid.mode(i);
      // Modes in the half-spectrum interior stand for a conjugate pair.
      const double weight = (s.grid.dim() == 1 ? k[0] : k[1]) == 0 ? 1.0 : 2.0;
      const double e = weight * std::norm(s.coeffs[i]) * (double(k[0]) * k[0] + double(k[1]) * k[1]);
      total += e;
      if (std::max(std::abs(k[0]), std::abs(k[1])) > half_band) high += e;
    }
  }
  return total > 0.0 ? std::sqrt(high / total) : 0.0;
}

ScalarField dealiased_product(const ScalarField& a, const ScalarField& b) {
  return dealias(a * b);
}

}  // namespace lagflow
