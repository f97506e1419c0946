#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace finsler {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
  OutsideDomain,
  ZeroVector,
  InvalidCoefficients,
  InvariantViolation,
  StiffnessFailure,
  NoConnection,
  Unreachable,
  PositivityViolated,
  NotUnitSpeed,
  EmptyComplement,
  SchemaError,
  UsageError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A base point together with a tangent vector at it, in chart coordinates.
struct TangentSample {
  Vector point;
  Vector vector;
};

enum class DerivativeMode { Exact, FiniteDifference };

}  // namespace finsler
