#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ttortho {

/// Row-major dense matrix of doubles. Entry (i, j) lives at data()[i * cols() + j].
class DenseMatrix {
 public:
  DenseMatrix() = default;
  /// Zero-filled rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of `data`; throws std::invalid_argument on a length mismatch or a
  /// non-finite entry.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> values);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }

  std::vector<double> column(std::size_t j) const;
  DenseMatrix transpose() const;
  /// Leading rows x cols block.
  DenseMatrix block(std::size_t rows, std::size_t cols) const;
  double frobenius_norm() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double alpha, const DenseMatrix& a);

struct QRResult {
  DenseMatrix q;  // rows x k, orthonormal columns
  DenseMatrix r;  // k x cols, upper trapezoidal, nonnegative diagonal
};

/// Economy Householder QR with k = min(rows, cols). Reflectors use the sign of the pivot
/// entry to avoid cancellation; afterwards rows of R (and columns of Q) are flipped so the
/// diagonal of R is nonnegative.
QRResult qr_factor(const DenseMatrix& a);

struct SVDResult {
  DenseMatrix u;                     // rows x k
  std::vector<double> singular_values;  // k values, nonincreasing
  DenseMatrix vt;                    // k x cols

  std::size_t rank() const noexcept { return singular_values.size(); }
  DenseMatrix reconstruct() const;
};

/// Thin SVD by one-sided Jacobi on the triangular factor of a QR preconditioning step.
/// Each singular pair is signed so that the first nonzero entry of its left vector is
/// positive. Throws ConvergenceFailure when the sweep limit is reached.
SVDResult svd(const DenseMatrix& a);

/// Keeps the smallest leading rank whose discarded tail has 2-norm <= threshold (at least 1).
std::size_t truncation_rank(std::span<const double> singular_values, double threshold);
SVDResult svd_truncate(const SVDResult& s, double threshold);
/// Keeps the leading `rank` triplets (clamped to the available rank).
SVDResult svd_keep(const SVDResult& s, std::size_t rank);

/// Lower-triangular Cholesky factor. The input is symmetrized before factoring; an
/// asymmetry above 1e-12 relative is a ShapeError, a non-positive pivot throws
/// NumericallySingularGram.
DenseMatrix cholesky(const DenseMatrix& g);

/// Explicit inverse of an upper-triangular matrix by column back-substitution.
DenseMatrix invert_upper_triangular(const DenseMatrix& r);

/// sigma_max / sigma_min; +infinity when sigma_min is zero or at the rounding level of sigma_max.
double condition_number_2(const DenseMatrix& a);

/// Largest singular value.
double spectral_norm(const DenseMatrix& a);

}  // namespace ttortho
