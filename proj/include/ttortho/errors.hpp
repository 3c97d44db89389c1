#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ttortho {

/// Operands whose orders, mode sizes or matrix dimensions do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Multi-index or linear index outside its range.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class TooLargeToDensify : public std::runtime_error {
 public:
  TooLargeToDensify(std::size_t elements, std::size_t cap)
      : std::runtime_error("densify: " + std::to_string(elements) +
                           " entries exceed the cap of " + std::to_string(cap)),
        elements_(elements),
        cap_(cap) {}

  std::size_t elements() const noexcept { return elements_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t elements_;
  std::size_t cap_;
};

class ConvergenceFailure : public std::runtime_error {
 public:
  explicit ConvergenceFailure(double residual)
      : std::runtime_error("svd: Jacobi sweeps did not converge (residual " +
                           std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Cholesky met a non-positive pivot: the Gram matrix is singular in working precision.
class NumericallySingularGram : public std::runtime_error {
 public:
  explicit NumericallySingularGram(std::size_t pivot)
      : std::runtime_error("cholesky: non-positive pivot at index " + std::to_string(pivot)),
        pivot_(pivot) {}

  /// Zero-based index of the failing pivot.
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class SingularTriangular : public std::runtime_error {
 public:
  explicit SingularTriangular(std::size_t index)
      : std::runtime_error("triangular inverse: zero diagonal entry at index " +
                           std::to_string(index)),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class KrylovBreakdown : public std::runtime_error {
 public:
  explicit KrylovBreakdown(std::size_t step)
      : std::runtime_error("krylov: zero vector at step " + std::to_string(step)), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Gram-Schmidt residual vanished: input vector `index` lies in the span of its predecessors.
class LinearDependence : public std::runtime_error {
 public:
  explicit LinearDependence(std::size_t index)
      : std::runtime_error("orthogonalization: input " + std::to_string(index) +
                           " is numerically dependent on its predecessors"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Householder vector construction found a negative squared remainder beyond tolerance.
class NumericalDefect : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed TTV1 data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ttortho
