#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ttortho {

/// Order-3 TT-core of shape (left_rank, mode_size, right_rank); the right index runs
/// fastest, so the buffer is also the row-major (left*mode) x right unfolding.
class TTCore {
 public:
  TTCore() = default;
  TTCore(std::size_t left_rank, std::size_t mode_size, std::size_t right_rank);
  TTCore(std::size_t left_rank, std::size_t mode_size, std::size_t right_rank,
         std::vector<double> data);

  std::size_t left_rank() const noexcept { return left_; }
  std::size_t mode_size() const noexcept { return mode_; }
  std::size_t right_rank() const noexcept { return right_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(std::size_t a, std::size_t i, std::size_t b) const noexcept {
    return data_[(a * mode_ + i) * right_ + b];
  }
  double& operator()(std::size_t a, std::size_t i, std::size_t b) noexcept {
    return data_[(a * mode_ + i) * right_ + b];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  friend bool operator==(const TTCore&, const TTCore&) = default;

 private:
  std::size_t left_ = 0;
  std::size_t mode_ = 0;
  std::size_t right_ = 0;
  std::vector<double> data_;
};

/// Tensor of order d in TT-format: x(i1..id) = X1(i1) X2(i2) ... Xd(id), boundary ranks 1.
class TTVector {
 public:
  TTVector() = default;
  /// Validates chaining of the core ranks and r0 = rd = 1; throws ShapeError.
  explicit TTVector(std::vector<TTCore> cores);

  std::size_t order() const noexcept { return cores_.size(); }
  std::size_t mode_size(std::size_t k) const noexcept { return cores_[k].mode_size(); }
  std::vector<std::size_t> mode_sizes() const;
  /// TT-rank r_k for k in 0..d.
  std::size_t rank(std::size_t k) const noexcept;
  std::vector<std::size_t> ranks() const;
  std::size_t max_rank() const noexcept;

  const TTCore& core(std::size_t k) const noexcept { return cores_[k]; }
  std::span<const TTCore> cores() const noexcept { return cores_; }

  friend bool operator==(const TTVector&, const TTVector&) = default;

 private:
  std::vector<TTCore> cores_;
};

/// Order-4 operator core of shape (left_rank, rows, cols, right_rank), right index fastest.
class TTMatrixCore {
 public:
  TTMatrixCore() = default;
  TTMatrixCore(std::size_t left_rank, std::size_t rows, std::size_t cols,
               std::size_t right_rank);

  std::size_t left_rank() const noexcept { return left_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t right_rank() const noexcept { return right_; }

  double operator()(std::size_t a, std::size_t i, std::size_t j, std::size_t b) const noexcept {
    return data_[((a * rows_ + i) * cols_ + j) * right_ + b];
  }
  double& operator()(std::size_t a, std::size_t i, std::size_t j, std::size_t b) noexcept {
    return data_[((a * rows_ + i) * cols_ + j) * right_ + b];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

 private:
  std::size_t left_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t right_ = 0;
  std::vector<double> data_;
};

/// Linear operator on R^{n1 x ... x nd} in TT-format with square mode blocks.
class TTMatrix {
 public:
  TTMatrix() = default;
  explicit TTMatrix(std::vector<TTMatrixCore> cores);

  std::size_t order() const noexcept { return cores_.size(); }
  std::vector<std::size_t> mode_sizes() const;
  std::vector<std::size_t> ranks() const;
  const TTMatrixCore& core(std::size_t k) const noexcept { return cores_[k]; }

 private:
  std::vector<TTMatrixCore> cores_;
};

/// Default upper bound on the number of entries densify() will materialize.
inline constexpr std::size_t kDefaultDensifyCap = 10'000'000;

/// Entry at a zero-based multi-index; throws IndexError when out of range.
double element(const TTVector& x, std::span<const std::size_t> index);

/// Sum with interior ranks r_k + s_k (block-diagonal interior cores).
TTVector add(const TTVector& x, const TTVector& y);
/// alpha * x, applied to the first core only.
TTVector scale(const TTVector& x, double alpha);
/// x + alpha * y; same ranks as add().
TTVector axpy(double alpha, const TTVector& y, const TTVector& x);

double inner_product(const TTVector& x, const TTVector& y);
double norm(const TTVector& x);

TTMatrix scale(const TTMatrix& a, double alpha);
/// Matrix-vector product; result ranks are the products R_k * r_k.
TTVector apply_operator(const TTMatrix& a, const TTVector& x);

/// Full tensor flattened with mode 1 running fastest (the psi ordering).
std::vector<double> densify(const TTVector& x, std::size_t cap = kDefaultDensifyCap);
/// Dense operator matrix (row index and column index both in psi ordering).
std::vector<double> densify(const TTMatrix& a, std::size_t cap = kDefaultDensifyCap);

/// Sum over cores of r_{k-1} n_k r_k.
std::size_t storage_count(const TTVector& x);
std::size_t dense_size(const TTVector& x);

/// Zero tensor with all ranks 1.
TTVector zeros_tt(std::span<const std::size_t> mode_sizes);

}  // namespace ttortho
