#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ttortho/tt.hpp"

namespace ttortho {

/// Bijection between zero-based multi-indices and linear indices, mode 1 fastest:
/// psi(i1..id) = i1 + sum_{a>1} i_a * m_a with m_a = n1 * ... * n_{a-1}.
class MultiIndexMap {
 public:
  explicit MultiIndexMap(std::vector<std::size_t> mode_sizes);

  std::size_t order() const noexcept { return mode_sizes_.size(); }
  std::size_t size() const noexcept { return size_; }
  const std::vector<std::size_t>& mode_sizes() const noexcept { return mode_sizes_; }
  const std::vector<std::size_t>& strides() const noexcept { return strides_; }

  std::size_t psi(std::span<const std::size_t> index) const;
  std::vector<std::size_t> phi(std::size_t linear) const;

 private:
  std::vector<std::size_t> mode_sizes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Rank-1 canonical basis tensor e_i = e_{i1} x ... x e_{id}, (i1..id) = phi(i).
TTVector canonical_tt(const MultiIndexMap& map, std::size_t linear);
/// The first `count` canonical basis tensors.
std::vector<TTVector> canonical_basis(const MultiIndexMap& map, std::size_t count);

TTVector ones_tt(std::span<const std::size_t> mode_sizes);
TTVector ones_tt(std::size_t order, std::size_t mode_size);

/// Dirichlet Laplacian sum_k I x .. x T x .. x I with T = tridiag(-1, 2, -1), unit spacing.
/// Operator ranks are (1, 2, ..., 2, 1).
TTMatrix laplacian_tt(std::size_t order, std::size_t mode_size);

struct KrylovSetSpec {
  std::size_t order = 3;
  std::size_t mode_size = 15;
  std::size_t count = 20;
};

/// a_1 = ones / ||ones||, a_{j+1} = normalize(round_rank1(-Laplacian a_j)). Every vector has
/// all TT-ranks 1. Throws KrylovBreakdown if an iterate vanishes.
std::vector<TTVector> krylov_set(const KrylovSetSpec& spec);

/// Breakdown threshold on ||x_{j+1}|| in krylov_set.
inline constexpr double kKrylovBreakdownNorm = 1e-300;

}  // namespace ttortho
