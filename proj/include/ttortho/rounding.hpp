#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <variant>

#include "ttortho/tt.hpp"

namespace ttortho {

/// Rank-reduction target for tt_round.
class RoundingConfig {
 public:
  struct Accuracy {
    double delta;
  };
  struct MaxRank {
    std::size_t rank;
  };

  /// Relative accuracy, 0 < delta < 1.
  static RoundingConfig accuracy(double delta, std::string tag = {});
  /// Interior ranks capped at `rank` >= 1.
  static RoundingConfig max_rank(std::size_t rank, std::string tag = {});

  const std::variant<Accuracy, MaxRank>& mode() const noexcept { return mode_; }
  const std::string& tag() const noexcept { return tag_; }

 private:
  RoundingConfig(std::variant<Accuracy, MaxRank> mode, std::string tag)
      : mode_(mode), tag_(std::move(tag)) {}

  std::variant<Accuracy, MaxRank> mode_;
  std::string tag_;
};

/// Thread-safe tally of tt_round invocations keyed by the config tag.
class RoundingLedger {
 public:
  void record(const std::string& tag);
  std::size_t count(const std::string& tag) const;
  std::size_t total() const;
  std::map<std::string, std::size_t> counts() const;
  void reset();

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::size_t> counts_;
};

/// TT-rounding: right-to-left QR orthogonalization, then left-to-right truncated SVDs.
/// In accuracy mode each of the d-1 truncations discards at most delta*||x||/sqrt(d-1),
/// so ||x - result|| <= delta*||x||. A zero input yields the rank-1 zero tensor and an
/// order-1 input is returned unchanged. Every call is recorded in `ledger` when given.
TTVector tt_round(const TTVector& x, const RoundingConfig& cfg, RoundingLedger* ledger = nullptr);

/// Per-tag call counts.
std::map<std::string, std::size_t> rounding_call_count(const RoundingLedger& ledger);

}  // namespace ttortho
