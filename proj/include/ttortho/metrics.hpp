#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ttortho/dense.hpp"
#include "ttortho/tt.hpp"

namespace ttortho {

/// Unit round-off of IEEE-754 binary64, 2^-53.
inline constexpr double kUnitRoundoff = 0x1p-53;

/// ||I - Q^T Q||_2 with (Q^T Q)(i, j) = <q_i, q_j>.
double loss_of_orthogonality(std::span<const TTVector> q);

/// 2-norm of I - G for a Gram matrix G, symmetrized first.
double gram_defect_norm(const DenseMatrix& gram);

/// Loss of orthogonality of every prefix q_1..q_k as vectors are appended.
class OrthogonalityTracker {
 public:
  /// Appends q and returns the loss of orthogonality of the current prefix.
  double push(const TTVector& q);
  std::size_t size() const noexcept { return basis_.size(); }
  const DenseMatrix& gram() const noexcept { return gram_; }

 private:
  std::vector<TTVector> basis_;
  DenseMatrix gram_;
};

/// storage_count(x) / prod n_k.
double compression_ratio(const TTVector& x);
/// storage_count(before) / storage_count(after); ShapeError on a mode mismatch.
double compression_gain(const TTVector& before, const TTVector& after);
double compression_gain(std::size_t storage_before, std::size_t storage_after);

struct Conditioning {
  double kappa;
  double kappa_sq;
};

/// Condition number of the densified columns [a_1 .. a_k] and its square.
Conditioning condition_track(std::span<const TTVector> a, std::size_t cap = kDefaultDensifyCap);

/// Condition numbers of every leading prefix A_1 .. A_m, densifying each input once.
std::vector<Conditioning> condition_series(std::span<const TTVector> a,
                                           std::size_t cap = kDefaultDensifyCap);

}  // namespace ttortho
