#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skillaudit {

enum class ErrorKind {
  Calendar,
  Dimension,
  DegenerateInput,
  InsufficientSample,
  NoOverlap,
  SchemeInfeasible,
  Data,
  NoCrossing,
  Numeric,
  Domain,
  Config,
  Stationarity,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Calendar: return "calendar";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::InsufficientSample: return "insufficient-sample";
    case ErrorKind::NoOverlap: return "no-overlap";
    case ErrorKind::SchemeInfeasible: return "scheme-infeasible";
    case ErrorKind::Data: return "data";
    case ErrorKind::NoCrossing: return "no-crossing";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Config: return "config";
    case ErrorKind::Stationarity: return "stationarity";
  }
  return "unknown";
}

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace skillaudit
