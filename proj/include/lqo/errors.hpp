#pragma once

#include <stdexcept>
#include <string>

namespace lqo {

/// Base class for numerical failures (as opposed to std::invalid_argument,
/// which is thrown for malformed inputs).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iteration hit its cap without meeting the tolerance.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, int iterations)
      : NumericalError(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

/// The state matrix of a system is not Hurwitz.
class UnstableSystemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A reduced model came out unstable; kept distinct from UnstableSystemError
/// because QBT can legitimately produce one.
class UnstableRomError : public UnstableSystemError {
 public:
  using UnstableSystemError::UnstableSystemError;
};

/// sI - A is singular at a requested frequency, or two interpolation
/// nodes coincide.
class FrequencyCollisionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A requested truncation order is not supported by the numerical rank.
class RankError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A kernel or transfer-function sample failed; the message names the node.
class SamplingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace lqo
