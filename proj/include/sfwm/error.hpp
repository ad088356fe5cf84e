#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sfwm {

enum class ErrorKind {
  // input / validation problems
  InvalidParameter,
  Parse,
  Data,
  OutOfRange,
  InvalidGeometry,
  Validity,
  InvalidCombination,
  Resolution,
  AsymptoticValidity,
  InvalidState,
  InvalidSettings,
  Config,
  // numerical failures
  Degenerate,
  UndefinedCar,
  Bracket,
  UndefinedEstimator,
  UndefinedVisibility,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of a numerical procedure on otherwise valid input.
  bool is_numerical() const noexcept;

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace sfwm
