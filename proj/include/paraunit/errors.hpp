#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace paraunit {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  SizeLimitExceeded,
  NotIsometric,
  NotHermitian,
  NotSchurStable,
  ConvergenceFailure,
  SingularMatrix,
  EvalAtPole,
  SingularDenominator,
  SideMismatch,
  PoleNotInDisk,
  ImproperFunction,
  NotCoIsometricRealization,
  InconsistentPair,
  NotIsometricConstant,
  NotFIR,
  AngleCountMismatch,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code and, for tolerance failures,
/// the residual that was measured.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<double> residual = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        residual_(residual) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  std::optional<double> residual_;
};

}  // namespace paraunit
