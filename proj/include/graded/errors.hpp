#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graded {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonSquare : public Error {
 public:
  NonSquare(std::ptrdiff_t rows, std::ptrdiff_t cols)
      : Error("matrix is not square: " + std::to_string(rows) + "x" + std::to_string(cols)) {}
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonHermitian : public Error {
 public:
  NonHermitian(double adjustment, double scale)
      : Error("matrix is not Hermitian: symmetrization moved an entry by " + std::to_string(adjustment) +
              " (scale " + std::to_string(scale) + ")"),
        adjustment_(adjustment) {}
  double adjustment() const noexcept { return adjustment_; }

 private:
  double adjustment_;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Raised by inv_sqrt when the smallest eigenvalue falls inside the dead band.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(double min_eigenvalue, double max_eigenvalue)
      : Error("matrix is not positive definite: eigenvalue range [" + std::to_string(min_eigenvalue) + ", " +
              std::to_string(max_eigenvalue) + "]"),
        min_eigenvalue_(min_eigenvalue),
        max_eigenvalue_(max_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  double max_eigenvalue() const noexcept { return max_eigenvalue_; }

 private:
  double min_eigenvalue_;
  double max_eigenvalue_;
};

/// The metric is degenerate (or, on the Euclidean path, not positive definite).
/// level() is -1 when the failure is not tied to a level.
class DegenerateMetric : public Error {
 public:
  explicit DegenerateMetric(const std::string& what, long level = -1) : Error(what), level_(level) {}
  long level() const noexcept { return level_; }

 private:
  long level_;
};

class LinearlyDependentInput : public Error {
 public:
  LinearlyDependentInput(std::size_t level, double min_eigenvalue)
      : Error("input vectors are linearly dependent at level " + std::to_string(level) +
              " (smallest eigenvalue of the projected Gram matrix: " + std::to_string(min_eigenvalue) + ")"),
        level_(level),
        min_eigenvalue_(min_eigenvalue) {}
  std::size_t level() const noexcept { return level_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  std::size_t level_;
  double min_eigenvalue_;
};

class TerminalIsotropicVector : public Error {
 public:
  explicit TerminalIsotropicVector(std::size_t level)
      : Error("level " + std::to_string(level) +
              " reduces to a single isotropic vector and there is no higher level to promote it into"),
        level_(level) {}
  std::size_t level() const noexcept { return level_; }

 private:
  std::size_t level_;
};

class LevelNotReady : public Error {
 public:
  using Error::Error;
};

class InvalidIndex : public Error {
 public:
  using Error::Error;
};

class InvalidDomain : public Error {
 public:
  using Error::Error;
};

class NonPositiveWeight : public Error {
 public:
  using Error::Error;
};

class InsufficientGrid : public Error {
 public:
  using Error::Error;
};

class QuadratureOrderTooLow : public Error {
 public:
  using Error::Error;
};

class NotACounterexample : public Error {
 public:
  using Error::Error;
};

}  // namespace graded
