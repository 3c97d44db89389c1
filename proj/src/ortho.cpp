#include "ttortho/ortho.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ttortho/errors.hpp"
#include "ttortho/generators.hpp"

namespace ttortho {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Rounds at the kernel accuracy and books the call into the result being assembled.
class Rounder {
 public:
  Rounder(Kernel kernel, const OrthoOptions& opts, OrthoResult& out)
      : cfg_(RoundingConfig::accuracy(opts.delta, std::string(kernel_name(kernel)))),
        ledger_(opts.ledger),
        out_(out) {}

  TTVector operator()(const TTVector& x, const char* series, std::size_t index) {
    TTVector y = tt_round(x, cfg_, ledger_);
    ++out_.rounding_calls;
    out_.events.push_back(RoundingEvent{series, index, out_.rounding_calls, x.ranks(), y.ranks(),
                                        storage_count(x), storage_count(y)});
    return y;
  }

 private:
  RoundingConfig cfg_;
  RoundingLedger* ledger_;
  OrthoResult& out_;
};

void check_inputs(std::span<const TTVector> a, const char* who) {
  if (a.empty()) throw std::invalid_argument(std::string(who) + ": empty input set");
  const auto modes = a.front().mode_sizes();
  for (const TTVector& x : a)
    if (x.mode_sizes() != modes)
      throw ShapeError(std::string(who) + ": inputs have different mode sizes");
}

[[noreturn]] void fail_dependent(std::size_t index, OrthoResult& out) {
  throw KernelFailure<LinearDependence>(LinearDependence(index), std::move(out));
}

// Shared body of CGS (project the original a_i) and MGS (project the running p).
OrthoResult gram_schmidt(Kernel kernel, std::span<const TTVector> a, const OrthoOptions& opts,
                         bool modified) {
  check_inputs(a, "gram_schmidt");
  const std::size_t m = a.size();
  OrthoResult out;
  out.r = DenseMatrix(m, m);
  Rounder round(kernel, opts, out);
  for (std::size_t i = 0; i < m; ++i) {
    TTVector p = a[i];
    for (std::size_t j = 0; j < i; ++j) {
      const double c = inner_product(modified ? p : a[i], out.q[j]);
      out.r(j, i) = c;
      p = axpy(-c, out.q[j], p);
    }
    p = round(p, "p", i);
    const double nrm = norm(p);
    if (nrm <= kDependenceFactor * kEps * norm(a[i])) fail_dependent(i, out);
    out.r(i, i) = nrm;
    out.q.push_back(scale(p, 1.0 / nrm));
  }
  return out;
}

// CGS2 projects the frozen previous pass p_{k-1}; MGS2 the running p_k.
OrthoResult gram_schmidt_twice(Kernel kernel, std::span<const TTVector> a,
                               const OrthoOptions& opts, bool modified) {
  check_inputs(a, "gram_schmidt_twice");
  const std::size_t m = a.size();
  OrthoResult out;
  DenseMatrix r1(m, m);
  DenseMatrix r2(m, m);
  out.r = DenseMatrix(m, m);
  Rounder round(kernel, opts, out);
  for (std::size_t i = 0; i < m; ++i) {
    TTVector prev = a[i];
    for (int pass = 1; pass <= 2; ++pass) {
      DenseMatrix& rk = pass == 1 ? r1 : r2;
      TTVector p = prev;
      for (std::size_t j = 0; j < i; ++j) {
        const double c = inner_product(modified ? p : prev, out.q[j]);
        rk(j, i) = c;
        p = axpy(-c, out.q[j], p);
      }
      prev = round(p, pass == 1 ? "p1" : "p2", i);
    }
    const double nrm = norm(prev);
    if (nrm <= kDependenceFactor * kEps * norm(a[i])) {
      out.r = r1 + r2;
      fail_dependent(i, out);
    }
    r2(i, i) = nrm;
    out.q.push_back(scale(prev, 1.0 / nrm));
  }
  out.r = r1 + r2;
  return out;
}

// q_i = round(sum_{k<=i} Rinv(k, i) a_k) for i < count.
void gram_combine(std::span<const TTVector> a, const DenseMatrix& rinv, std::size_t count,
                  Rounder& round, OrthoResult& out) {
  for (std::size_t i = 0; i < count; ++i) {
    TTVector p = scale(a[0], rinv(0, i));
    for (std::size_t k = 1; k <= i; ++k) p = axpy(rinv(k, i), a[k], p);
    out.q.push_back(round(p, "q", i));
  }
}

HouseholderVector householder_vector(const TTVector& a, std::span<const TTVector> basis,
                                     Rounder& round, std::size_t index) {
  if (basis.empty()) throw std::invalid_argument("tth_vec: empty canonical basis");
  const std::size_t i = basis.size() - 1;
  HouseholderVector hv;
  hv.r.assign(i + 1, 0.0);
  double s = 0.0;
  TTVector w = a;
  for (std::size_t j = 0; j < i; ++j) {
    hv.r[j] = inner_product(a, basis[j]);
    s += hv.r[j] * hv.r[j];
    w = axpy(-hv.r[j], basis[j], w);
  }
  w = round(w, "w", index);

  const double a2 = inner_product(a, a);
  double rem = a2 - s;
  if (rem < -1e-12 * a2)
    throw NumericalDefect("tth_vec: ||a||^2 - s = " + std::to_string(rem) +
                          " is negative beyond tolerance at index " + std::to_string(index));
  rem = std::max(rem, 0.0);
  const double sign = inner_product(a, basis[i]) >= 0.0 ? 1.0 : -1.0;
  hv.r[i] = sign * std::sqrt(rem);
  w = axpy(-hv.r[i], basis[i], w);
  w = round(w, "u", index);

  const double nw = norm(w);
  if (nw > kDependenceFactor * kEps * std::sqrt(std::max(a2, 0.0))) hv.u = scale(w, 1.0 / nw);
  return hv;
}

}  // namespace

std::string_view kernel_name(Kernel k) {
  switch (k) {
    case Kernel::cgs: return "cgs";
    case Kernel::mgs: return "mgs";
    case Kernel::cgs2: return "cgs2";
    case Kernel::mgs2: return "mgs2";
    case Kernel::gram: return "gram";
    case Kernel::householder: return "householder";
  }
  return "unknown";
}

std::optional<Kernel> parse_kernel(std::string_view name) {
  for (Kernel k : kAllKernels)
    if (kernel_name(k) == name) return k;
  return std::nullopt;
}

OrthoResult tt_cgs(std::span<const TTVector> a, const OrthoOptions& opts) {
  return gram_schmidt(Kernel::cgs, a, opts, false);
}

OrthoResult tt_mgs(std::span<const TTVector> a, const OrthoOptions& opts) {
  return gram_schmidt(Kernel::mgs, a, opts, true);
}

OrthoResult tt_cgs2(std::span<const TTVector> a, const OrthoOptions& opts) {
  return gram_schmidt_twice(Kernel::cgs2, a, opts, false);
}

OrthoResult tt_mgs2(std::span<const TTVector> a, const OrthoOptions& opts) {
  return gram_schmidt_twice(Kernel::mgs2, a, opts, true);
}

OrthoResult tt_gram(std::span<const TTVector> a, const OrthoOptions& opts) {
  check_inputs(a, "tt_gram");
  const std::size_t m = a.size();
  DenseMatrix g(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) g(i, j) = g(j, i) = inner_product(a[i], a[j]);

  OrthoResult out;
  Rounder round(Kernel::gram, opts, out);
  DenseMatrix l;
  try {
    l = cholesky(g);
  } catch (const NumericallySingularGram& e) {
    // The leading block of the factor is exact for the prefix, so those vectors are kept.
    const std::size_t p = e.pivot();
    out.r = DenseMatrix(m, m);
    if (p > 0) {
      const DenseMatrix rp = cholesky(g.block(p, p)).transpose();
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) out.r(i, j) = rp(i, j);
      gram_combine(a, invert_upper_triangular(rp), p, round, out);
    }
    throw KernelFailure<NumericallySingularGram>(e, std::move(out));
  }
  out.r = l.transpose();
  gram_combine(a, invert_upper_triangular(out.r), m, round, out);
  return out;
}

HouseholderVector tth_vec(const TTVector& a, std::span<const TTVector> basis,
                          const OrthoOptions& opts) {
  OrthoResult scratch;
  Rounder round(Kernel::householder, opts, scratch);
  return householder_vector(a, basis, round, basis.empty() ? 0 : basis.size() - 1);
}

TTVector apply_h_vec(const TTVector& a, const TTVector& u) {
  const double c = inner_product(a, u);
  if (c == 0.0) return a;
  return axpy(-2.0 * c, u, a);
}

OrthoResult tt_householder(std::span<const TTVector> a, const OrthoOptions& opts) {
  check_inputs(a, "tt_householder");
  const std::size_t m = a.size();
  const MultiIndexMap map(a.front().mode_sizes());
  if (m > map.size())
    throw std::invalid_argument("tt_householder: more inputs than the ambient dimension");
  const std::vector<TTVector> basis = canonical_basis(map, m);

  OrthoResult out;
  out.r = DenseMatrix(m, m);
  Rounder round(Kernel::householder, opts, out);
  std::vector<TTVector> work(a.begin(), a.end());
  TTVector w = work[0];
  try {
    for (std::size_t i = 0; i < m; ++i) {
      HouseholderVector hv =
          householder_vector(w, std::span<const TTVector>(basis).first(i + 1), round, i);
      for (std::size_t j = 0; j <= i; ++j) out.r(j, i) = hv.r[j];
      if (hv.u)
        for (std::size_t j = i; j < m; ++j) work[j] = apply_h_vec(work[j], *hv.u);
      out.householder_vectors.push_back(std::move(hv.u));
      if (i + 1 < m) w = round(work[i + 1], "a", i + 1);
    }
  } catch (const NumericalDefect& e) {
    throw KernelFailure<NumericalDefect>(e, std::move(out));
  }

  // q_i = H_1 ... H_i e_i: reflections applied to e_i in reverse order.
  for (std::size_t i = 0; i < m; ++i) {
    TTVector q = basis[i];
    for (std::size_t j = i + 1; j-- > 0;)
      if (out.householder_vectors[j]) q = apply_h_vec(q, *out.householder_vectors[j]);
    out.q.push_back(round(q, "q", i));
  }
  return out;
}

OrthoResult orthogonalize(Kernel kernel, std::span<const TTVector> a, const OrthoOptions& opts) {
  switch (kernel) {
    case Kernel::cgs: return tt_cgs(a, opts);
    case Kernel::mgs: return tt_mgs(a, opts);
    case Kernel::cgs2: return tt_cgs2(a, opts);
    case Kernel::mgs2: return tt_mgs2(a, opts);
    case Kernel::gram: return tt_gram(a, opts);
    case Kernel::householder: return tt_householder(a, opts);
  }
  throw std::invalid_argument("orthogonalize: unknown kernel");
}

}  // namespace ttortho
