#include "sfwm/error.hpp"

namespace sfwm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::Data: return "data-error";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::InvalidGeometry: return "invalid-geometry";
    case ErrorKind::Validity: return "validity-error";
    case ErrorKind::InvalidCombination: return "invalid-combination";
    case ErrorKind::Resolution: return "resolution-error";
    case ErrorKind::AsymptoticValidity: return "asymptotic-validity";
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::InvalidSettings: return "invalid-settings";
    case ErrorKind::Config: return "config-error";
    case ErrorKind::Degenerate: return "degenerate-input";
    case ErrorKind::UndefinedCar: return "undefined-car";
    case ErrorKind::Bracket: return "bracket-error";
    case ErrorKind::UndefinedEstimator: return "undefined-estimator";
    case ErrorKind::UndefinedVisibility: return "undefined-visibility";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

bool Error::is_numerical() const noexcept {
  switch (kind_) {
    case ErrorKind::Degenerate:
    case ErrorKind::UndefinedCar:
    case ErrorKind::Bracket:
    case ErrorKind::UndefinedEstimator:
    case ErrorKind::UndefinedVisibility:
      return true;
    default:
      return false;
  }
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace sfwm
