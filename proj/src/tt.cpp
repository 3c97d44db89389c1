#include "ttortho/tt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "kernels_detail.hpp"
#include "ttortho/errors.hpp"

namespace ttortho {

namespace {

void require_same_modes(const TTVector& x, const TTVector& y, const char* what) {
  if (x.order() != y.order() || x.mode_sizes() != y.mode_sizes())
    throw ShapeError(std::string(what) + ": operands have different mode sizes");
}

std::size_t checked_product(std::span<const std::size_t> sizes, std::size_t cap) {
  std::size_t total = 1;
  bool overflow = false;
  for (std::size_t n : sizes) overflow = overflow || __builtin_mul_overflow(total, n, &total);
  if (overflow) throw TooLargeToDensify(std::numeric_limits<std::size_t>::max(), cap);
  if (total > cap) throw TooLargeToDensify(total, cap);
  return total;
}

}  // namespace

TTCore::TTCore(std::size_t left_rank, std::size_t mode_size, std::size_t right_rank)
    : left_(left_rank),
      mode_(mode_size),
      right_(right_rank),
      data_(left_rank * mode_size * right_rank, 0.0) {}

TTCore::TTCore(std::size_t left_rank, std::size_t mode_size, std::size_t right_rank,
               std::vector<double> data)
    : left_(left_rank), mode_(mode_size), right_(right_rank), data_(std::move(data)) {
  if (data_.size() != left_ * mode_ * right_)
    throw ShapeError("TTCore: buffer length does not match (" + std::to_string(left_) + ", " +
                     std::to_string(mode_) + ", " + std::to_string(right_) + ")");
}

TTVector::TTVector(std::vector<TTCore> cores) : cores_(std::move(cores)) {
  if (cores_.empty()) throw ShapeError("TTVector: order must be at least 1");
  if (cores_.front().left_rank() != 1 || cores_.back().right_rank() != 1)
    throw ShapeError("TTVector: boundary ranks must be 1");
  for (std::size_t k = 0; k < cores_.size(); ++k) {
    const TTCore& c = cores_[k];
    if (c.left_rank() == 0 || c.mode_size() == 0 || c.right_rank() == 0)
      throw ShapeError("TTVector: core " + std::to_string(k) + " has a zero dimension");
    if (k + 1 < cores_.size() && c.right_rank() != cores_[k + 1].left_rank())
      throw ShapeError("TTVector: rank mismatch between cores " + std::to_string(k) + " and " +
                       std::to_string(k + 1));
  }
}

std::vector<std::size_t> TTVector::mode_sizes() const {
  std::vector<std::size_t> n(cores_.size());
  for (std::size_t k = 0; k < cores_.size(); ++k) n[k] = cores_[k].mode_size();
  return n;
}

std::size_t TTVector::rank(std::size_t k) const noexcept {
  return k == 0 ? cores_.front().left_rank() : cores_[k - 1].right_rank();
}

std::vector<std::size_t> TTVector::ranks() const {
  std::vector<std::size_t> r(cores_.size() + 1);
  for (std::size_t k = 0; k <= cores_.size(); ++k) r[k] = rank(k);
  return r;
}

std::size_t TTVector::max_rank() const noexcept {
  std::size_t r = 1;
  for (const TTCore& c : cores_) r = std::max(r, c.right_rank());
  return r;
}

TTMatrixCore::TTMatrixCore(std::size_t left_rank, std::size_t rows, std::size_t cols,
                           std::size_t right_rank)
    : left_(left_rank),
      rows_(rows),
      cols_(cols),
      right_(right_rank),
      data_(left_rank * rows * cols * right_rank, 0.0) {}

TTMatrix::TTMatrix(std::vector<TTMatrixCore> cores) : cores_(std::move(cores)) {
  if (cores_.empty()) throw ShapeError("TTMatrix: order must be at least 1");
  if (cores_.front().left_rank() != 1 || cores_.back().right_rank() != 1)
    throw ShapeError("TTMatrix: boundary ranks must be 1");
  for (std::size_t k = 0; k < cores_.size(); ++k) {
    if (cores_[k].rows() != cores_[k].cols())
      throw ShapeError("TTMatrix: core " + std::to_string(k) + " is not square");
    if (k + 1 < cores_.size() && cores_[k].right_rank() != cores_[k + 1].left_rank())
      throw ShapeError("TTMatrix: rank mismatch between cores " + std::to_string(k) + " and " +
                       std::to_string(k + 1));
  }
}

std::vector<std::size_t> TTMatrix::mode_sizes() const {
  std::vector<std::size_t> n(cores_.size());
  for (std::size_t k = 0; k < cores_.size(); ++k) n[k] = cores_[k].rows();
  return n;
}

std::vector<std::size_t> TTMatrix::ranks() const {
  std::vector<std::size_t> r(cores_.size() + 1);
  r[0] = 1;
  for (std::size_t k = 0; k < cores_.size(); ++k) r[k + 1] = cores_[k].right_rank();
  return r;
}

double element(const TTVector& x, std::span<const std::size_t> index) {
  if (index.size() != x.order()) throw IndexError("element: index has the wrong order");
  std::vector<double> row{1.0};
  for (std::size_t k = 0; k < x.order(); ++k) {
    const TTCore& c = x.core(k);
    if (index[k] >= c.mode_size())
      throw IndexError("element: index " + std::to_string(index[k]) + " out of range in mode " +
                       std::to_string(k));
    std::vector<double> next(c.right_rank(), 0.0);
    for (std::size_t a = 0; a < c.left_rank(); ++a)
      for (std::size_t b = 0; b < c.right_rank(); ++b) next[b] += row[a] * c(a, index[k], b);
    row = std::move(next);
  }
  return row[0];
}

TTVector add(const TTVector& x, const TTVector& y) {
  require_same_modes(x, y, "add");
  const std::size_t d = x.order();
  std::vector<TTCore> cores;
  cores.reserve(d);
  if (d == 1) {
    TTCore c = x.core(0);
    const auto yd = y.core(0).data();
    auto cd = c.data();
    for (std::size_t i = 0; i < cd.size(); ++i) cd[i] += yd[i];
    cores.push_back(std::move(c));
    return TTVector(std::move(cores));
  }
  for (std::size_t k = 0; k < d; ++k) {
    const TTCore& cx = x.core(k);
    const TTCore& cy = y.core(k);
    const std::size_t n = cx.mode_size();
    const bool first = k == 0;
    const bool last = k + 1 == d;
    const std::size_t left = first ? 1 : cx.left_rank() + cy.left_rank();
    const std::size_t right = last ? 1 : cx.right_rank() + cy.right_rank();
    TTCore c(left, n, right);
    // x occupies the leading block, y the trailing one; boundary cores share the unit rank.
    const std::size_t ya = first ? 0 : cx.left_rank();
    const std::size_t yb = last ? 0 : cx.right_rank();
    for (std::size_t a = 0; a < cx.left_rank(); ++a)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t b = 0; b < cx.right_rank(); ++b) c(a, i, b) = cx(a, i, b);
    for (std::size_t a = 0; a < cy.left_rank(); ++a)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t b = 0; b < cy.right_rank(); ++b) c(ya + a, i, yb + b) = cy(a, i, b);
    cores.push_back(std::move(c));
  }
  return TTVector(std::move(cores));
}

TTVector scale(const TTVector& x, double alpha) {
  std::vector<TTCore> cores(x.cores().begin(), x.cores().end());
  if (alpha != 1.0)
    for (double& v : cores.front().data()) v *= alpha;
  return TTVector(std::move(cores));
}

TTVector axpy(double alpha, const TTVector& y, const TTVector& x) {
  return add(x, scale(y, alpha));
}

double inner_product(const TTVector& x, const TTVector& y) {
  require_same_modes(x, y, "inner_product");
  // m holds the partial contraction, shaped r_k x s_k.
  std::vector<double> m{1.0};
  std::vector<double> z;
  for (std::size_t k = 0; k < x.order(); ++k) {
    const TTCore& cx = x.core(k);
    const TTCore& cy = y.core(k);
    const std::size_t r = cx.left_rank();
    const std::size_t s = cy.left_rank();
    const std::size_t n = cx.mode_size();
    const std::size_t r2 = cx.right_rank();
    const std::size_t s2 = cy.right_rank();
    // z (r x n*s2) = m (r x s) * Y (s x n*s2)
    z.resize(r * n * s2);
    detail::gemm_nn(m.data(), cy.data().data(), z.data(), r, s, n * s2);
    // m' (r2 x s2) = X^T (r2 x r*n) * z (r*n x s2)
    std::vector<double> next(r2 * s2);
    detail::gemm_tn(cx.data().data(), z.data(), next.data(), r2, r * n, s2);
    m = std::move(next);
  }
  return m[0];
}

double norm(const TTVector& x) { return std::sqrt(std::max(inner_product(x, x), 0.0)); }

TTMatrix scale(const TTMatrix& a, double alpha) {
  std::vector<TTMatrixCore> cores;
  cores.reserve(a.order());
  for (std::size_t k = 0; k < a.order(); ++k) cores.push_back(a.core(k));
  for (double& v : cores.front().data()) v *= alpha;
  return TTMatrix(std::move(cores));
}

TTVector apply_operator(const TTMatrix& a, const TTVector& x) {
  if (a.order() != x.order() || a.mode_sizes() != x.mode_sizes())
    throw ShapeError("apply_operator: operator and vector mode sizes differ");
  std::vector<TTCore> cores;
  cores.reserve(x.order());
  for (std::size_t k = 0; k < x.order(); ++k) {
    const TTMatrixCore& m = a.core(k);
    const TTCore& c = x.core(k);
    const std::size_t ra = m.left_rank();
    const std::size_t rb = m.right_rank();
    const std::size_t xa = c.left_rank();
    const std::size_t xb = c.right_rank();
    const std::size_t n = m.rows();
    TTCore out(ra * xa, n, rb * xb);
    for (std::size_t A = 0; A < ra; ++A)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t B = 0; B < rb; ++B) {
            const double mij = m(A, i, j, B);
            if (mij == 0.0) continue;
            for (std::size_t p = 0; p < xa; ++p)
              for (std::size_t q = 0; q < xb; ++q) out(A * xa + p, i, B * xb + q) += mij * c(p, j, q);
          }
    cores.push_back(std::move(out));
  }
  return TTVector(std::move(cores));
}

std::vector<double> densify(const TTVector& x, std::size_t cap) {
  const std::vector<std::size_t> n = x.mode_sizes();
  checked_product(n, cap);
  // t holds the prefix contraction as a (prefix entries) x r_k row-major matrix.
  std::vector<double> t{1.0};
  std::size_t prefix = 1;
  for (std::size_t k = 0; k < x.order(); ++k) {
    const TTCore& c = x.core(k);
    const std::size_t r = c.left_rank();
    const std::size_t r2 = c.right_rank();
    std::vector<double> next(prefix * c.mode_size() * r2, 0.0);
    std::vector<double> slice(r * r2);
    for (std::size_t i = 0; i < c.mode_size(); ++i) {
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r2; ++b) slice[a * r2 + b] = c(a, i, b);
      detail::gemm_nn(t.data(), slice.data(), next.data() + i * prefix * r2, prefix, r, r2);
    }
    t = std::move(next);
    prefix *= c.mode_size();
  }
  return t;
}

std::vector<double> densify(const TTMatrix& a, std::size_t cap) {
  const std::vector<std::size_t> n = a.mode_sizes();
  const std::size_t total = checked_product(n, cap);
  std::size_t entries = 0;
  if (__builtin_mul_overflow(total, total, &entries))
    throw TooLargeToDensify(std::numeric_limits<std::size_t>::max(), cap);
  if (entries > cap) throw TooLargeToDensify(entries, cap);
  std::vector<double> out(total * total, 0.0);
  std::vector<std::size_t> ri(n.size()), ci(n.size());
  for (std::size_t row = 0; row < total; ++row) {
    std::size_t rem = row;
    for (std::size_t k = 0; k < n.size(); ++k) {
      ri[k] = rem % n[k];
      rem /= n[k];
    }
    for (std::size_t col = 0; col < total; ++col) {
      rem = col;
      for (std::size_t k = 0; k < n.size(); ++k) {
        ci[k] = rem % n[k];
        rem /= n[k];
      }
      std::vector<double> v{1.0};
      for (std::size_t k = 0; k < n.size() && !v.empty(); ++k) {
        const TTMatrixCore& m = a.core(k);
        std::vector<double> next(m.right_rank(), 0.0);
        for (std::size_t p = 0; p < m.left_rank(); ++p)
          for (std::size_t q = 0; q < m.right_rank(); ++q) next[q] += v[p] * m(p, ri[k], ci[k], q);
        v = std::move(next);
      }
      out[row * total + col] = v[0];
    }
  }
  return out;
}

std::size_t storage_count(const TTVector& x) {
  std::size_t s = 0;
  for (const TTCore& c : x.cores()) s += c.size();
  return s;
}

std::size_t dense_size(const TTVector& x) {
  std::size_t s = 1;
  for (const TTCore& c : x.cores()) s *= c.mode_size();
  return s;
}

TTVector zeros_tt(std::span<const std::size_t> mode_sizes) {
  std::vector<TTCore> cores;
  cores.reserve(mode_sizes.size());
  for (std::size_t n : mode_sizes) cores.emplace_back(1, n, 1);
  return TTVector(std::move(cores));
}

}  // namespace ttortho
