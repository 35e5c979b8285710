#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semiflat {

/// Failure categories raised by the library. Each value corresponds to one
/// named error condition of a module operation.
enum class ErrorCode {
  // matalg3
  SingularPair,
  BadNilpotent,
  // gauge
  RealityViolation,
  MissingDerivatives,
  DegenerateAnsatz,
  GridMismatch,
  // pdesolve
  SingularU,
  NonConvergence,
  Blowup,
  ForbiddenRegion,
  InvalidGrid,
  // painleve
  SingularPoint,
  NEqualsThree,
  SingularApproach,
  StepUnderflow,
  NonpositiveH,
  // geometry
  SingularFrame,
  DegenerateFrame,
  // hessian
  VanishingSupport,
  NonInvertibleGradient,
  VanishingW,
  // io
  Schema,
  Io,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Damped Newton gave up; carries the iteration count and last residual norm.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(int iterations, double residual, const std::string& what)
      : Error(ErrorCode::NonConvergence, what), iterations_(iterations), residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Trajectory approached the H = 0 singular set; carries the last good point.
class SingularApproachError : public Error {
 public:
  SingularApproachError(double s, double h, const std::string& what)
      : Error(ErrorCode::SingularApproach, what), s_(s), h_(h) {}
  double s() const noexcept { return s_; }
  double h() const noexcept { return h_; }

 private:
  double s_;
  double h_;
};

}  // namespace semiflat
