#include "lagflow/interpolation.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "lagflow/error.hpp"
#include "lagflow/spectral.hpp"

namespace lagflow {

namespace {

using cplx = std::complex<double>;

// Phases exp(i k x) for k = 0..count-1. The recurrence is re-anchored every
// 32 steps to bound drift.
void phases(double x, int count, std::vector<cplx>& out) {
  out.resize(static_cast<std::size_t>(count));
  const cplx step = std::polar(1.0, x);
  for (int k = 0; k < count; ++k) {
    out[k] = (k % 32 == 0) ? std::polar(1.0, k * x) : out[k - 1] * step;
  }
}

std::array<double, 4> bspline_weights(double u) {
  const double u2 = u * u, u3 = u2 * u;
  return {(1.0 - u) * (1.0 - u) * (1.0 - u) / 6.0, (3.0 * u3 - 6.0 * u2 + 4.0) / 6.0,
          (-3.0 * u3 + 3.0 * u2 + 3.0 * u + 1.0) / 6.0, u3 / 6.0};
}

}  // namespace

Interpolation parse_interpolation(std::string_view name) {
  if (name == "spectral") return Interpolation::Spectral;
  if (name == "cubic" || name == "cubic-spline" || name == "spline") return Interpolation::CubicSpline;
  fail(ErrorKind::InvalidArgument,
       "unknown interpolation '" + std::string(name) + "' (available: spectral, cubic)");
}

std::string_view to_string(Interpolation method) {
  return method == Interpolation::Spectral ? "spectral" : "cubic";
}

PeriodicInterpolant::PeriodicInterpolant(const ScalarField& field, Interpolation method)
    : PeriodicInterpolant(std::vector<ScalarField>{field}, method) {}

PeriodicInterpolant::PeriodicInterpolant(const VectorField& field, Interpolation method)
    : PeriodicInterpolant(
          [&] {
            std::vector<ScalarField> v;
            for (int i = 0; i < field.dim(); ++i) v.push_back(field[i]);
            return v;
          }(),
          method) {}

PeriodicInterpolant::PeriodicInterpolant(std::vector<ScalarField> fields, Interpolation method)
    : grid_(fields.at(0).grid()), method_(method), count_(static_cast<int>(fields.size())) {
  const int n = grid_.n();
  const int half = grid_.half();
  for (const auto& f : fields) {
    require_same_grid(grid_, f.grid(), "PeriodicInterpolant");
    Spectrum s = to_spectrum(f);
    if (method_ == Interpolation::Spectral) {
      // Fold the conjugate half into a weight of 2 on the halved axis.
      for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const int k_last = static_cast<int>(i % static_cast<std::size_t>(half));
        if (k_last != 0 && k_last != n / 2) s.coeffs[i] *= 2.0;
      }
      coeffs_.push_back(std::move(s.coeffs));
    } else {
      // Periodic B-spline prefilter is the Fourier multiplier 6 / (4 + 2 cos(k h)) per axis.
      const double h = grid_.spacing();
      for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const auto k = grid_.mode(i);
        double denom = (4.0 + 2.0 * std::cos(k[0] * h)) / 6.0;
        if (grid_.dim() == 2) denom *= (4.0 + 2.0 * std::cos(k[1] * h)) / 6.0;
        s.coeffs[i] /= denom;
      }
      ScalarField control = from_spectrum(s);
      std::vector<cplx> c(control.size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = control[i];
      coeffs_.push_back(std::move(c));
    }
  }
}

PeriodicInterpolant PeriodicInterpolant::blend(const PeriodicInterpolant& a,
                                               const PeriodicInterpolant& b, double lambda) {
  require(a.grid_ == b.grid_ && a.method_ == b.method_ && a.count_ == b.count_,
          "PeriodicInterpolant::blend: incompatible interpolants");
  PeriodicInterpolant out = a;
  for (int f = 0; f < a.count_; ++f) {
    auto& c = out.coeffs_[f];
    const auto& cb = b.coeffs_[f];
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (1.0 - lambda) * c[i] + lambda * cb[i];
  }
  return out;
}

double PeriodicInterpolant::eval(const Point& x) const {
  require(count_ == 1, "PeriodicInterpolant::eval: scalar overload needs exactly one field");
  double v = 0.0;
  eval(x, std::span<double>(&v, 1));
  return v;
}

void PeriodicInterpolant::eval(const Point& x, std::span<double> out) const {
  if (method_ == Interpolation::Spectral)
    eval_spectral(x, out);
  else
    eval_spline(x, out);
}

void PeriodicInterpolant::eval_spectral(const Point& x, std::span<double> out) const {
  const int n = grid_.n();
  const int half = grid_.half();
  thread_local std::vector<cplx> px, py;
  if (grid_.dim() == 1) {
    phases(x[0], half, px);
    px[n / 2] = std::cos(0.5 * n * x[0]);  // symmetric Nyquist
    for (int f = 0; f < count_; ++f) {
      const auto& c = coeffs_[f];
      double acc = 0.0;
      for (int k = 0; k < half; ++k) acc += c[k].real() * px[k].real() - c[k].imag() * px[k].imag();
      out[f] = acc;
    }
    return;
  }
  // Axis 0 runs over full signed wavenumbers, axis 1 over the halved range.
  phases(x[0], half, px);
  phases(x[1], half, py);
  py[n / 2] = std::cos(0.5 * n * x[1]);
  for (int f = 0; f < count_; ++f) {
    const auto& c = coeffs_[f];
    double acc = 0.0;
    for (int i0 = 0; i0 < n; ++i0) {
      const cplx* row = c.data() + static_cast<std::size_t>(i0) * half;
      cplx inner(0.0, 0.0);
      for (int k1 = 0; k1 < half; ++k1) inner += row[k1] * py[k1];
      cplx phase;
      if (i0 == n / 2)
        phase = std::cos(0.5 * n * x[0]);
      else if (i0 < n / 2)
        phase = px[i0];
      else
        phase = std::conj(px[n - i0]);
      acc += (phase * inner).real();
    }
    out[f] = acc;
  }
}

void PeriodicInterpolant::eval_spline(const Point& x, std::span<double> out) const {
  const int n = grid_.n();
  const double h = grid_.spacing();
  auto locate = [&](double coord, int& base, std::array<double, 4>& w) {
    const double t = coord / h;
    const double fl = std::floor(t);
    w = bspline_weights(t - fl);
    base = static_cast<int>(fl) - 1;
  };
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  int b0 = 0;
  std::array<double, 4> w0{};
  locate(x[0], b0, w0);
  if (grid_.dim() == 1) {
    for (int f = 0; f < count_; ++f) {
      const auto& c = coeffs_[f];
      double acc = 0.0;
      for (int a = 0; a < 4; ++a) acc += w0[a] * c[wrap(b0 + a)].real();
      out[f] = acc;
    }
    return;
  }
  int b1 = 0;
  std::array<double, 4> w1{};
  locate(x[1], b1, w1);
  for (int f = 0; f < count_; ++f) {
    const auto& c = coeffs_[f];
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
      const std::size_t row = static_cast<std::size_t>(wrap(b0 + a)) * n;
      double inner = 0.0;
      for (int b = 0; b < 4; ++b) inner += w1[b] * c[row + wrap(b1 + b)].real();
      acc += w0[a] * inner;
    }
    out[f] = acc;
  }
}

}  // namespace lagflow
