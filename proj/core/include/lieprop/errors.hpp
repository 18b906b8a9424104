#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lieprop {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the exponential-coordinate domain (e.g. antipodal rotation).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

/// A parametric sample path left the coordinate domain.
class DomainExit : public Error {
 public:
  DomainExit(std::size_t step, const std::string& what)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Covariance is not positive semidefinite within tolerance.
class CholeskyFailure : public Error {
 public:
  using Error::Error;
};

class RejectionOverflow : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NonConcentrated : public Error {
 public:
  using Error::Error;
};

class InnovationSingular : public Error {
 public:
  using Error::Error;
};

class StepRejected : public Error {
 public:
  using Error::Error;
};

}  // namespace lieprop
