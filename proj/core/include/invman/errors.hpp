#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace invman {

// Root of every error raised by the library. The CLI maps the concrete type
// onto a process exit code, so new failure modes get their own subclass.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

class DefectiveMatrix : public Error {
 public:
  using Error::Error;
};

class NonHyperbolic : public Error {
 public:
  using Error::Error;
};

// Carries the offending multi-index and eigenvalue position.
class ResonanceDetected : public Error {
 public:
  ResonanceDetected(std::string what, std::vector<int> alpha, int target)
      : Error(std::move(what)), alpha_(std::move(alpha)), target_(target) {}

  const std::vector<int>& alpha() const { return alpha_; }
  int target() const { return target_; }

 private:
  std::vector<int> alpha_;
  int target_;
};

class SingularHomological : public Error {
 public:
  using Error::Error;
};

class SingularBlock : public Error {
 public:
  using Error::Error;
};

class UnsupportedDegree : public Error {
 public:
  using Error::Error;
};

class ProofImpossible : public Error {
 public:
  using Error::Error;
};

class EmptyLevelSet : public Error {
 public:
  using Error::Error;
};

class SymmetryViolated : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroInterval : public Error {
 public:
  using Error::Error;
};

class NegativeSqrt : public Error {
 public:
  using Error::Error;
};

}  // namespace invman
