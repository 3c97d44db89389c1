#include "ttortho/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "ttortho/errors.hpp"

namespace ttortho {

double gram_defect_norm(const DenseMatrix& gram) {
  const std::size_t k = gram.rows();
  if (gram.cols() != k) throw ShapeError("gram_defect_norm: Gram matrix is not square");
  DenseMatrix d(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      d(i, j) = (i == j ? 1.0 : 0.0) - 0.5 * (gram(i, j) + gram(j, i));
  if (k == 1) return std::abs(d(0, 0));
  return spectral_norm(d);
}

double loss_of_orthogonality(std::span<const TTVector> q) {
  if (q.empty()) throw std::invalid_argument("loss_of_orthogonality: empty set");
  const std::size_t k = q.size();
  DenseMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j <= i; ++j) g(i, j) = g(j, i) = inner_product(q[i], q[j]);
  return gram_defect_norm(g);
}

double OrthogonalityTracker::push(const TTVector& q) {
  const std::size_t k = basis_.size();
  DenseMatrix g(k + 1, k + 1);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) g(i, j) = gram_(i, j);
  for (std::size_t j = 0; j < k; ++j) g(k, j) = g(j, k) = inner_product(q, basis_[j]);
  g(k, k) = inner_product(q, q);
  gram_ = std::move(g);
  basis_.push_back(q);
  return gram_defect_norm(gram_);
}

double compression_ratio(const TTVector& x) {
  return static_cast<double>(storage_count(x)) / static_cast<double>(dense_size(x));
}

double compression_gain(std::size_t storage_before, std::size_t storage_after) {
  if (storage_after == 0) throw std::invalid_argument("compression_gain: empty tensor");
  return static_cast<double>(storage_before) / static_cast<double>(storage_after);
}

double compression_gain(const TTVector& before, const TTVector& after) {
  if (before.mode_sizes() != after.mode_sizes())
    throw ShapeError("compression_gain: tensors have different mode sizes");
  return compression_gain(storage_count(before), storage_count(after));
}

namespace {

DenseMatrix densified_columns(std::span<const TTVector> a, std::size_t cap) {
  if (a.empty()) throw std::invalid_argument("condition_track: empty set");
  const std::size_t rows = dense_size(a.front());
  if (rows > cap) throw TooLargeToDensify(rows, cap);
  DenseMatrix m(rows, a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const std::vector<double> v = densify(a[j], cap);
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = v[i];
  }
  return m;
}

Conditioning conditioning_of(const DenseMatrix& m) {
  const double kappa = condition_number_2(m);
  return {kappa, kappa * kappa};
}

}  // namespace

Conditioning condition_track(std::span<const TTVector> a, std::size_t cap) {
  return conditioning_of(densified_columns(a, cap));
}

std::vector<Conditioning> condition_series(std::span<const TTVector> a, std::size_t cap) {
  const DenseMatrix all = densified_columns(a, cap);
  std::vector<Conditioning> out;
  out.reserve(a.size());
  for (std::size_t k = 1; k <= a.size(); ++k) out.push_back(conditioning_of(all.block(all.rows(), k)));
  return out;
}

}  // namespace ttortho
