#include "lagflow/grid.hpp"

#include <numbers>
#include <string>

#include "lagflow/error.hpp"
#include "lagflow/fft.hpp"

namespace lagflow {

TorusGrid TorusGrid::make(int dim, int n) {
  if (dim != 1 && dim != 2)
    fail(ErrorKind::InvalidArgument,
         "dimension must be 1 or 2, got " + std::to_string(dim));
  if (n % 2 != 0)
    fail(ErrorKind::InvalidArgument,
         "n must be even, got " + std::to_string(n));
  if (n < 8)
    fail(ErrorKind::InvalidArgument,
         "n must be at least 8, got " + std::to_string(n));
  return TorusGrid(dim, n);
}

TorusGrid::TorusGrid(int dim, int n)
    : dim_(dim),
      n_(n),
      spacing_(2.0 * std::numbers::pi / n),
      size_(dim == 1 ? std::size_t(n) : std::size_t(n) * n),
      spectral_size_(dim == 1 ? std::size_t(n / 2 + 1)
                              : std::size_t(n) * (n / 2 + 1)),
      plans_(FftPlans::shared(dim, n)) {}

std::array<int, 2> TorusGrid::mode(std::size_t s) const noexcept {
  if (dim_ == 1) return {static_cast<int>(s), 0};
  const auto h = static_cast<std::size_t>(half());
  return {wavenumber(static_cast<int>(s / h)), static_cast<int>(s % h)};
}

std::array<bool, 2> TorusGrid::nyquist(std::size_t s) const noexcept {
  if (dim_ == 1) return {static_cast<int>(s) == n_ / 2, false};
  const auto h = static_cast<std::size_t>(half());
  return {is_nyquist(static_cast<int>(s / h)),
          is_nyquist(static_cast<int>(s % h))};
}

Point TorusGrid::node(std::size_t flat) const noexcept {
  if (dim_ == 1) return {spacing_ * static_cast<double>(flat), 0.0};
  const auto n = static_cast<std::size_t>(n_);
  return {spacing_ * static_cast<double>(flat / n),
          spacing_ * static_cast<double>(flat % n)};
}

}  // namespace lagflow
