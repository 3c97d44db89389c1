#include "ttortho/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kernels_detail.hpp"
#include "ttortho/dense.hpp"

namespace ttortho {

RoundingConfig RoundingConfig::accuracy(double delta, std::string tag) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("RoundingConfig: accuracy must lie in (0, 1)");
  return RoundingConfig(Accuracy{delta}, std::move(tag));
}

RoundingConfig RoundingConfig::max_rank(std::size_t rank, std::string tag) {
  if (rank < 1) throw std::invalid_argument("RoundingConfig: max rank must be at least 1");
  return RoundingConfig(MaxRank{rank}, std::move(tag));
}

void RoundingLedger::record(const std::string& tag) {
  std::lock_guard lock(mutex_);
  ++counts_[tag];
}

std::size_t RoundingLedger::count(const std::string& tag) const {
  std::lock_guard lock(mutex_);
  const auto it = counts_.find(tag);
  return it == counts_.end() ? 0 : it->second;
}

std::size_t RoundingLedger::total() const {
  std::lock_guard lock(mutex_);
  std::size_t t = 0;
  for (const auto& [tag, n] : counts_) t += n;
  return t;
}

std::map<std::string, std::size_t> RoundingLedger::counts() const {
  std::lock_guard lock(mutex_);
  return counts_;
}

void RoundingLedger::reset() {
  std::lock_guard lock(mutex_);
  counts_.clear();
}

std::map<std::string, std::size_t> rounding_call_count(const RoundingLedger& ledger) {
  return ledger.counts();
}

TTVector tt_round(const TTVector& x, const RoundingConfig& cfg, RoundingLedger* ledger) {
  if (ledger != nullptr) ledger->record(cfg.tag());
  const std::size_t d = x.order();
  if (d == 1) return x;

  std::vector<TTCore> cores(x.cores().begin(), x.cores().end());

  // Right-to-left: make cores 1..d-1 right-orthogonal via QR of the transposed unfolding.
  for (std::size_t k = d - 1; k > 0; --k) {
    const TTCore& c = cores[k];
    const std::size_t r0 = c.left_rank();
    const std::size_t n = c.mode_size();
    const std::size_t r1 = c.right_rank();
    const DenseMatrix unfold(r0, n * r1, std::vector<double>(c.data().begin(), c.data().end()));
    const QRResult qr = qr_factor(unfold.transpose());  // (n r1) x s, s x r0
    const std::size_t s = qr.r.rows();
    const DenseMatrix qt = qr.q.transpose();  // s x (n r1)
    cores[k] = TTCore(s, n, r1, std::vector<double>(qt.data().begin(), qt.data().end()));

    TTCore& prev = cores[k - 1];
    const std::size_t pr = prev.left_rank() * prev.mode_size();
    std::vector<double> merged(pr * s);
    // prev (pr x r0) * R^T (r0 x s)
    detail::gemm_nt(prev.data().data(), qr.r.data().data(), merged.data(), pr, r0, s);
    prev = TTCore(prev.left_rank(), prev.mode_size(), s, std::move(merged));
  }

  const TTCore& head = cores.front();
  double nrm = 0.0;
  for (double v : head.data()) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (nrm == 0.0) return zeros_tt(x.mode_sizes());

  double threshold = 0.0;
  std::size_t rank_cap = 0;
  if (const auto* acc = std::get_if<RoundingConfig::Accuracy>(&cfg.mode()))
    threshold = acc->delta * nrm / std::sqrt(static_cast<double>(d - 1));
  else
    rank_cap = std::get<RoundingConfig::MaxRank>(cfg.mode()).rank;

  // Left-to-right truncated SVDs.
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const TTCore& c = cores[k];
    const std::size_t r0 = c.left_rank();
    const std::size_t n = c.mode_size();
    const std::size_t r1 = c.right_rank();
    const DenseMatrix unfold(r0 * n, r1, std::vector<double>(c.data().begin(), c.data().end()));
    const SVDResult full = svd(unfold);
    const SVDResult s = rank_cap == 0 ? svd_truncate(full, threshold)
                                      : svd_keep(full, std::min(rank_cap, full.rank()));
    const std::size_t rho = s.rank();
    cores[k] = TTCore(r0, n, rho, std::vector<double>(s.u.data().begin(), s.u.data().end()));

    // carry = diag(sigma) * Vt (rho x r1), absorbed into the next core.
    std::vector<double> carry(s.vt.data().begin(), s.vt.data().end());
    for (std::size_t i = 0; i < rho; ++i)
      for (std::size_t j = 0; j < r1; ++j) carry[i * r1 + j] *= s.singular_values[i];
    TTCore& next = cores[k + 1];
    const std::size_t cols = next.mode_size() * next.right_rank();
    std::vector<double> merged(rho * cols);
    detail::gemm_nn(carry.data(), next.data().data(), merged.data(), rho, r1, cols);
    next = TTCore(rho, next.mode_size(), next.right_rank(), std::move(merged));
  }
  return TTVector(std::move(cores));
}

}  // namespace ttortho
