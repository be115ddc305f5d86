#include "lagflow/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace lagflow {

namespace {
// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FftPlans::Impl {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

FftPlans::FftPlans(int dim, int n) : impl_(std::make_unique<Impl>()) {
  const std::size_t real_size = dim == 1 ? n : std::size_t(n) * n;
  const std::size_t complex_size =
      dim == 1 ? n / 2 + 1 : std::size_t(n) * (n / 2 + 1);
  std::vector<double> r(real_size);
  std::vector<std::complex<double>> c(complex_size);
  auto* cp = reinterpret_cast<fftw_complex*>(c.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  if (dim == 1) {
    impl_->forward = fftw_plan_dft_r2c_1d(n, r.data(), cp, flags);
    impl_->inverse = fftw_plan_dft_c2r_1d(n, cp, r.data(), flags);
  } else {
    impl_->forward = fftw_plan_dft_r2c_2d(n, n, r.data(), cp, flags);
    impl_->inverse = fftw_plan_dft_c2r_2d(n, n, cp, r.data(), flags);
  }
}

FftPlans::~FftPlans() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(impl_->forward);
  fftw_destroy_plan(impl_->inverse);
}

void FftPlans::forward(std::span<const double> in,
                       std::span<std::complex<double>> out) const {
  // FFTW never writes the input of an r2c transform.
  fftw_execute_dft_r2c(impl_->forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void FftPlans::inverse(std::span<std::complex<double>> in,
                       std::span<double> out) const {
  fftw_execute_dft_c2r(impl_->inverse,
                       reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

std::shared_ptr<const FftPlans> FftPlans::shared(int dim, int n) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const FftPlans>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{dim, n}];
  if (!slot) slot = std::make_shared<const FftPlans>(dim, n);
  return slot;
}

}  // namespace lagflow
