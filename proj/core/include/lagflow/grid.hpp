#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace lagflow {

using Point = std::array<double, 2>;

class FftPlans;

/// Uniform periodic grid on [0, 2*pi)^d, d in {1, 2}.
///
/// Nodes are stored row-major with axis 0 slowest. The real-to-complex
/// spectral layout halves the last axis: n^(d-1) * (n/2 + 1) coefficients.
/// Signed wavenumbers follow the FFT ordering 0, 1, ..., n/2, -n/2+1, ..., -1
/// on full axes; index n/2 is the Nyquist mode.
class TorusGrid {
 public:
  /// Throws InvalidArgument unless d in {1,2}, n even and n >= 8.
  static TorusGrid make(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double spacing() const noexcept { return spacing_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t spectral_size() const noexcept { return spectral_size_; }
  int half() const noexcept { return n_ / 2 + 1; }

  /// Signed wavenumber for a full-axis index.
  int wavenumber(int index) const noexcept {
    return index <= n_ / 2 ? index : index - n_;
  }
  bool is_nyquist(int index) const noexcept { return index == n_ / 2; }

  /// Wavenumbers (k0, k1) of a spectral index; k1 = 0 when d = 1.
  std::array<int, 2> mode(std::size_t spectral_index) const noexcept;
  /// Nyquist flags per axis for a spectral index.
  std::array<bool, 2> nyquist(std::size_t spectral_index) const noexcept;

  Point node(std::size_t flat) const noexcept;

  /// Largest |k| retained by the 2/3 dealiasing rule: products of retained
  /// modes never alias back into the retained band.
  int dealias_cutoff() const noexcept { return (n_ - 1) / 3; }

  const FftPlans& fft() const noexcept { return *plans_; }

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_;
  }

 private:
  TorusGrid(int dim, int n);

  int dim_;
  int n_;
  double spacing_;
  std::size_t size_;
  std::size_t spectral_size_;
  std::shared_ptr<const FftPlans> plans_;
};

}  // namespace lagflow
