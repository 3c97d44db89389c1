#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttortho/dense.hpp"
#include "ttortho/rounding.hpp"
#include "ttortho/tt.hpp"

namespace ttortho {

enum class Kernel { cgs, mgs, cgs2, mgs2, gram, householder };

inline constexpr Kernel kAllKernels[] = {Kernel::cgs,  Kernel::mgs,  Kernel::cgs2,
                                         Kernel::mgs2, Kernel::gram, Kernel::householder};

std::string_view kernel_name(Kernel k);
/// Inverse of kernel_name; std::nullopt for unknown names.
std::optional<Kernel> parse_kernel(std::string_view name);

/// One tt_round call made by a kernel.
struct RoundingEvent {
  /// What was rounded: "p" (Gram-Schmidt residual), "p1"/"p2" (first/second pass),
  /// "q" (basis vector), "w" (zeroed Householder candidate), "u" (Householder vector),
  /// "a" (next input after the reflections so far).
  std::string series;
  std::size_t index = 0;      // zero-based basis index the call belongs to
  std::size_t call = 0;       // one-based position among the kernel's rounding calls
  std::vector<std::size_t> ranks_before;
  std::vector<std::size_t> ranks_after;
  std::size_t storage_before = 0;
  std::size_t storage_after = 0;
};

struct OrthoResult {
  std::vector<TTVector> q;
  DenseMatrix r;  // m x m upper triangular; column i holds the coefficients of a_i
  std::size_t rounding_calls = 0;
  std::vector<RoundingEvent> events;
  /// Householder kernel only: u_i, or nullopt where the reflector degenerated to identity.
  std::vector<std::optional<TTVector>> householder_vectors;
};

/// Mixed into kernel errors so callers can recover the work completed before the failure.
class PartialResult {
 public:
  explicit PartialResult(OrthoResult partial) : partial_(std::move(partial)) {}
  virtual ~PartialResult() = default;
  const OrthoResult& partial() const noexcept { return partial_; }

 private:
  OrthoResult partial_;
};

/// A kernel error of type `Error` carrying the partial result.
template <class Error>
class KernelFailure final : public Error, public PartialResult {
 public:
  KernelFailure(const Error& error, OrthoResult partial)
      : Error(error), PartialResult(std::move(partial)) {}
};

/// Options shared by every kernel.
struct OrthoOptions {
  double delta = 1e-8;
  /// Receives one record per tt_round call, tagged with the kernel name.
  RoundingLedger* ledger = nullptr;
};

OrthoResult tt_cgs(std::span<const TTVector> a, const OrthoOptions& opts);
OrthoResult tt_mgs(std::span<const TTVector> a, const OrthoOptions& opts);
OrthoResult tt_cgs2(std::span<const TTVector> a, const OrthoOptions& opts);
OrthoResult tt_mgs2(std::span<const TTVector> a, const OrthoOptions& opts);
OrthoResult tt_gram(std::span<const TTVector> a, const OrthoOptions& opts);
OrthoResult tt_householder(std::span<const TTVector> a, const OrthoOptions& opts);

OrthoResult orthogonalize(Kernel kernel, std::span<const TTVector> a, const OrthoOptions& opts);

struct HouseholderVector {
  /// Unit Householder vector, or nullopt when a already lies in span(F): the reflector is
  /// then the identity.
  std::optional<TTVector> u;
  /// r(j) = <a, f_j> for j < i, r(i) = sign(<a, f_i>) sqrt(||a||^2 - sum r(j)^2), sign(0) = +1.
  std::vector<double> r;
};

/// Householder vector moving `a` onto span(basis). Makes two tt_round calls.
HouseholderVector tth_vec(const TTVector& a, std::span<const TTVector> basis,
                          const OrthoOptions& opts);

/// a - 2 <a, u> u without rounding; returns `a` untouched when <a, u> is exactly zero.
TTVector apply_h_vec(const TTVector& a, const TTVector& u);

/// Relative size of ||p|| against ||a_i|| below which an input counts as dependent.
inline constexpr double kDependenceFactor = 1e3;

}  // namespace ttortho
