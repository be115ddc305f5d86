#include "lagflow/error.hpp"

#include <sstream>

namespace lagflow {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Folding: return "folding";
    case ErrorKind::Vacuum: return "vacuum";
    case ErrorKind::NoConvergence: return "no-convergence";
    case ErrorKind::Blowup: return "blowup";
    case ErrorKind::CflViolation: return "cfl-violation";
    case ErrorKind::HistoryGap: return "history-gap";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message,
                     std::optional<double> time) {
  std::ostringstream os;
  os << to_string(kind);
  if (time) os << " at t=" << *time;
  os << ": " << message;
  return os.str();
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<double> time)
    : std::runtime_error(decorate(kind, message, time)),
      kind_(kind),
      time_(time),
      bare_message_(message) {}

Error Error::at_time(double t) const {
  if (time_) return *this;
  return Error(kind_, bare_message_, t);
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace lagflow
