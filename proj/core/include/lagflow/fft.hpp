#pragma once

#include <complex>
#include <memory>
#include <span>

namespace lagflow {

/// FFTW plans for one grid shape. Plans are created once per (d, n) and
/// shared by every grid of that shape; execution uses the new-array
/// interface and is safe to call concurrently.
class FftPlans {
 public:
  FftPlans(int dim, int n);
  ~FftPlans();
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  /// Unnormalized forward real-to-complex transform.
  void forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;
  /// Unnormalized inverse; `in` is used as scratch and destroyed.
  void inverse(std::span<std::complex<double>> in,
               std::span<double> out) const;

  static std::shared_ptr<const FftPlans> shared(int dim, int n);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lagflow
