#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lagflow {

enum class ErrorKind {
  InvalidArgument,
  Folding,        // Jacobian determinant of a map fell below the folding floor
  Vacuum,         // density below rho_min
  NoConvergence,  // Picard iteration cap exceeded
  Blowup,         // gradient growth or non-finite values
  CflViolation,
  HistoryGap,     // velocity history does not cover a requested time
  Parse,
  Validation,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind and, for solver failures, the
/// simulation time at which the failure was detected.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<double> time = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> time() const noexcept { return time_; }

  /// Same error, stamped with a time if it has none yet.
  Error at_time(double t) const;

 private:
  ErrorKind kind_;
  std::optional<double> time_;
  std::string bare_message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::InvalidArgument, message);
}

}  // namespace lagflow
