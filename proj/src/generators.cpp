#include "ttortho/generators.hpp"

#include <stdexcept>
#include <string>

#include "ttortho/errors.hpp"
#include "ttortho/rounding.hpp"

namespace ttortho {

MultiIndexMap::MultiIndexMap(std::vector<std::size_t> mode_sizes)
    : mode_sizes_(std::move(mode_sizes)) {
  if (mode_sizes_.empty()) throw ShapeError("MultiIndexMap: order must be at least 1");
  strides_.reserve(mode_sizes_.size());
  for (std::size_t n : mode_sizes_) {
    if (n == 0) throw ShapeError("MultiIndexMap: zero mode size");
    strides_.push_back(size_);
    size_ *= n;
  }
}

std::size_t MultiIndexMap::psi(std::span<const std::size_t> index) const {
  if (index.size() != mode_sizes_.size()) throw IndexError("psi: index has the wrong order");
  std::size_t linear = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= mode_sizes_[k])
      throw IndexError("psi: index " + std::to_string(index[k]) + " out of range in mode " +
                       std::to_string(k));
    linear += index[k] * strides_[k];
  }
  return linear;
}

std::vector<std::size_t> MultiIndexMap::phi(std::size_t linear) const {
  if (linear >= size_)
    throw IndexError("phi: linear index " + std::to_string(linear) + " out of range");
  std::vector<std::size_t> index(mode_sizes_.size());
  for (std::size_t k = 0; k < mode_sizes_.size(); ++k) {
    index[k] = linear % mode_sizes_[k];
    linear /= mode_sizes_[k];
  }
  return index;
}

TTVector canonical_tt(const MultiIndexMap& map, std::size_t linear) {
  const std::vector<std::size_t> index = map.phi(linear);
  std::vector<TTCore> cores;
  cores.reserve(index.size());
  for (std::size_t k = 0; k < index.size(); ++k) {
    TTCore c(1, map.mode_sizes()[k], 1);
    c(0, index[k], 0) = 1.0;
    cores.push_back(std::move(c));
  }
  return TTVector(std::move(cores));
}

std::vector<TTVector> canonical_basis(const MultiIndexMap& map, std::size_t count) {
  std::vector<TTVector> basis;
  basis.reserve(count);
  for (std::size_t i = 0; i < count; ++i) basis.push_back(canonical_tt(map, i));
  return basis;
}

TTVector ones_tt(std::span<const std::size_t> mode_sizes) {
  std::vector<TTCore> cores;
  cores.reserve(mode_sizes.size());
  for (std::size_t n : mode_sizes)
    cores.emplace_back(1, n, 1, std::vector<double>(n, 1.0));
  return TTVector(std::move(cores));
}

TTVector ones_tt(std::size_t order, std::size_t mode_size) {
  const std::vector<std::size_t> n(order, mode_size);
  return ones_tt(n);
}

TTMatrix laplacian_tt(std::size_t order, std::size_t mode_size) {
  if (order < 1) throw std::invalid_argument("laplacian_tt: order must be at least 1");
  if (mode_size < 2) throw std::invalid_argument("laplacian_tt: mode size must be at least 2");
  const std::size_t n = mode_size;
  auto put_identity = [n](TTMatrixCore& c, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < n; ++i) c(a, i, i, b) = 1.0;
  };
  auto put_stencil = [n](TTMatrixCore& c, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < n; ++i) {
      c(a, i, i, b) = 2.0;
      if (i > 0) c(a, i, i - 1, b) = -1.0;
      if (i + 1 < n) c(a, i, i + 1, b) = -1.0;
    }
  };

  std::vector<TTMatrixCore> cores;
  if (order == 1) {
    TTMatrixCore c(1, n, n, 1);
    put_stencil(c, 0, 0);
    cores.push_back(std::move(c));
    return TTMatrix(std::move(cores));
  }
  // Rank-2 Kronecker-sum cores: first [T I], middle [[I 0] [T I]], last [I; T].
  TTMatrixCore first(1, n, n, 2);
  put_stencil(first, 0, 0);
  put_identity(first, 0, 1);
  cores.push_back(std::move(first));
  for (std::size_t k = 1; k + 1 < order; ++k) {
    TTMatrixCore mid(2, n, n, 2);
    put_identity(mid, 0, 0);
    put_stencil(mid, 1, 0);
    put_identity(mid, 1, 1);
    cores.push_back(std::move(mid));
  }
  TTMatrixCore last(2, n, n, 1);
  put_identity(last, 0, 0);
  put_stencil(last, 1, 0);
  cores.push_back(std::move(last));
  return TTMatrix(std::move(cores));
}

std::vector<TTVector> krylov_set(const KrylovSetSpec& spec) {
  if (spec.count < 1) throw std::invalid_argument("krylov_set: count must be at least 1");
  const TTMatrix op = scale(laplacian_tt(spec.order, spec.mode_size), -1.0);
  const RoundingConfig rank1 = RoundingConfig::max_rank(1, "krylov");

  auto normalize = [](const TTVector& x, std::size_t step) {
    const double nrm = norm(x);
    if (!(nrm > kKrylovBreakdownNorm)) throw KrylovBreakdown(step);
    return scale(x, 1.0 / nrm);
  };

  std::vector<TTVector> set;
  set.reserve(spec.count);
  set.push_back(normalize(tt_round(ones_tt(spec.order, spec.mode_size), rank1), 0));
  for (std::size_t j = 1; j < spec.count; ++j) {
    const TTVector x = apply_operator(op, set.back());
    if (!(norm(x) > kKrylovBreakdownNorm)) throw KrylovBreakdown(j);
    set.push_back(normalize(tt_round(x, rank1), j));
  }
  return set;
}

}  // namespace ttortho
