// Acceptance checks; one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "ttortho/errors.hpp"
#include "ttortho/experiment.hpp"
#include "ttortho/generators.hpp"
#include "ttortho/metrics.hpp"
#include "ttortho/ortho.hpp"
#include "ttortho/rounding.hpp"

using namespace ttortho;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

void criterion_rounding() {
  const auto t0 = Clock::now();
  test::Rng rng(20240601);
  const double deltas[] = {1e-2, 1e-4, 1e-8};
  double worst = 0.0;
  bool ok = true;
  for (int c = 0; c < 200; ++c) {
    const std::size_t d = 2 + static_cast<std::size_t>(c % 3);
    std::vector<std::size_t> modes(d), ranks(d + 1, 1);
    for (auto& n : modes) n = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    for (std::size_t k = 1; k < d; ++k) ranks[k] = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    const TTVector x = test::random_tt(rng, modes, ranks);
    const std::vector<double> dx = densify(x);
    for (double delta : deltas) {
      const double err = test::rel_diff(densify(tt_round(x, RoundingConfig::accuracy(delta))), dx);
      worst = std::max(worst, err / delta);
      ok = ok && err <= delta;
    }
  }
  const double t = seconds_since(t0);
  report("1 rounding contract", ok && t < 10.0,
         fmt("600 roundings, max err/delta %.3g, %.2f s", worst, t));
}

test::DenseQR oracle_for(Kernel kernel, const DenseMatrix& a) {
  switch (kernel) {
    case Kernel::cgs: return test::dense_cgs(a);
    case Kernel::mgs: return test::dense_mgs(a);
    case Kernel::cgs2: return test::dense_cgs2(a);
    case Kernel::mgs2: return test::dense_mgs2(a);
    case Kernel::gram: return test::dense_gram(a);
    case Kernel::householder: return test::dense_householder(a);
  }
  return {};
}

void criterion_oracle() {
  const auto t0 = Clock::now();
  const std::vector<TTVector> a = krylov_set({3, 5, 8});
  const DenseMatrix dense_a = test::columns_of(a);
  OrthoOptions opts;
  opts.delta = 1e-14;
  bool ok = true;
  std::string detail;
  for (Kernel kernel : kAllKernels) {
    const OrthoResult r = orthogonalize(kernel, a, opts);
    const test::DenseQR ref = oracle_for(kernel, dense_a);
    const DenseMatrix q = test::columns_of(r.q);
    double min_dot = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      min_dot = std::min(min_dot, std::abs(test::dot(q.column(i), ref.q.column(i))));
    const double r_err = test::frobenius_diff(r.r, ref.r) / ref.r.frobenius_norm();
    ok = ok && min_dot >= 1.0 - 1e-6 && r_err <= 1e-6;
    detail += std::string(kernel_name(kernel)) + fmt(" dot %.3g R %.2g; ", 1.0 - min_dot, r_err);
  }
  const double t = seconds_since(t0);
  report("2 dense oracle equivalence", ok && t < 30.0, detail + fmt("%.2f s", t));
}

void criterion_counts() {
  bool ok = true;
  std::string detail;
  for (std::size_t m : {std::size_t{5}, std::size_t{20}}) {
    test::Rng rng(700 + m);
    std::vector<TTVector> a;
    for (std::size_t i = 0; i < m; ++i)
      a.push_back(test::random_tt(rng, std::vector<std::size_t>{15, 15, 15},
                                  std::vector<std::size_t>{1, 2, 2, 1}));
    for (Kernel kernel : kAllKernels) {
      const std::size_t expect = kernel == Kernel::householder                         ? 4 * m - 1
                                 : kernel == Kernel::cgs2 || kernel == Kernel::mgs2 ? 2 * m
                                                                                    : m;
      OrthoOptions opts;
      opts.delta = 1e-3;
      std::size_t got = 0;
      try {
        got = orthogonalize(kernel, a, opts).rounding_calls;
      } catch (const PartialResult& p) {
        got = p.partial().rounding_calls;
        detail += std::string(kernel_name(kernel)) + " failed; ";
      }
      ok = ok && got == expect;
      detail += std::string(kernel_name(kernel)) + " m=" + std::to_string(m) + ":" +
                std::to_string(got) + "/" + std::to_string(expect) + " ";
    }
  }
  report("3 rounding call counts", ok, detail);
}

std::map<std::string, std::vector<double>> loo_by_kernel(const std::vector<CsvRecord>& rows) {
  std::map<std::string, std::vector<double>> out;
  for (const CsvRecord& r : rows)
    if (r.error.empty() && r.loo) out[r.kernel].push_back(*r.loo);
  return out;
}

void criterion_loo_curves() {
  const auto t0 = Clock::now();
  const std::vector<TTVector> a = krylov_set({3, 15, 20});
  bool ok_a = true, ok_b = true, ok_c = false, ok_d = true;
  std::string da, db, dc, dd;
  for (double delta : {1e-3, 1e-5, 1e-8}) {
    std::vector<CsvRecord> rows;
    for (Kernel kernel : {Kernel::cgs, Kernel::mgs, Kernel::mgs2, Kernel::gram, Kernel::householder}) {
      const SeriesOutcome s = run_series(kernel, delta, a);
      rows.insert(rows.end(), s.records.begin(), s.records.end());
    }
    auto loo = loo_by_kernel(rows);
    const auto& hh = loo["householder"];
    const double hmax = *std::max_element(hh.begin(), hh.end());
    ok_a = ok_a && hh.size() == 20 && hmax <= 100 * delta;
    da += fmt("delta %.0e max %.3g; ", delta, hmax);

    if (delta == 1e-8) {
      const auto& m2 = loo["mgs2"];
      const double m2max = *std::max_element(m2.begin(), m2.end());
      ok_b = m2.size() == 20 && m2max <= 1e-11;
      db = fmt("max LOO_MGS2 %.3g", m2max);
      double best = 0.0;
      for (std::size_t k = 0; k < std::min(loo["cgs"].size(), loo["mgs"].size()); ++k)
        best = std::max(best, loo["cgs"][k] / loo["mgs"][k]);
      ok_c = best >= 1e3;
      dc = fmt("max LOO_CGS/LOO_MGS %.3g", best);
    }

    const auto& cg = loo["cgs"];
    const auto& gr = loo["gram"];
    double worst = 1.0;
    std::size_t worst_k = 0;
    for (std::size_t k = 0; k < std::min(cg.size(), gr.size()); ++k) {
      const double ratio = std::max(cg[k], gr[k]) / std::max(std::min(cg[k], gr[k]), 1e-300);
      if (ratio > worst) {
        worst = ratio;
        worst_k = k + 1;
      }
    }
    const bool full = gr.size() == cg.size();
    ok_d = ok_d && full && worst <= 1e2;
    dd += fmt("delta %.0e worst %.3g", delta, worst) + " at k=" + std::to_string(worst_k) +
          (full ? "" : " gram stopped at k=" + std::to_string(gr.size())) + "; ";
  }
  const double t = seconds_since(t0);
  const bool in_time = t < 300.0;
  report("4a householder LOO <= 100 delta", ok_a && in_time, da + fmt("%.1f s", t));
  report("4b MGS2 LOO <= 1e-11 at delta 1e-8", ok_b && in_time, db);
  report("4c CGS vs MGS separation >= 1e3", ok_c && in_time, dc);
  report("4d CGS and Gram within 1e2", ok_d && in_time, dd);
}

void criterion_gram_breakdown() {
  const std::vector<TTVector> a = krylov_set({3, 15, 25});
  OrthoOptions opts;
  opts.delta = 1e-8;
  try {
    const OrthoResult r = tt_gram(a, opts);
    const double loo = loss_of_orthogonality(r.q);
    report("5 gram breakdown", loo >= 1e-1, fmt("no exception, LOO %.3g", loo));
  } catch (const NumericallySingularGram& e) {
    report("5 gram breakdown", true, std::string("NumericallySingularGram: ") + e.what());
  }
}

void criterion_memory(std::size_t d, std::size_t n, std::size_t m) {
  const auto t0 = Clock::now();
  const std::vector<TTVector> a = krylov_set({d, n, m});
  OrthoOptions opts;
  opts.delta = 1e-5;
  const OrthoResult r = tt_householder(a, opts);
  const double dense = static_cast<double>(dense_size(a.front()));
  bool ok = true;
  std::size_t checked = 0;
  double max_ratio = 0.0, max_gain = 0.0;
  for (const RoundingEvent& e : r.events) {
    if (e.series != "u" && e.series != "a") continue;
    ++checked;
    const double ratio = static_cast<double>(e.storage_after) / dense;
    const double gain = compression_gain(e.storage_before, e.storage_after);
    max_ratio = std::max(max_ratio, ratio);
    max_gain = std::max(max_gain, gain);
    const double product = gain * static_cast<double>(e.storage_after);
    ok = ok && ratio < 1.0 && static_cast<std::size_t>(std::llround(product)) == e.storage_before &&
         std::abs(product - static_cast<double>(e.storage_before)) <=
             std::numeric_limits<double>::epsilon() * static_cast<double>(e.storage_before);
  }
  for (const auto& u : r.householder_vectors)
    if (u) ok = ok && compression_ratio(*u) < 1.0;
  ok = ok && checked == 2 * m - 1;
  const double t = seconds_since(t0);
  report("6 memory metrics (d=" + std::to_string(d) + " n=" + std::to_string(n) +
             " m=" + std::to_string(m) + ")",
         ok && t < 1200.0,
         std::to_string(checked) + fmt(" u/a roundings, max ratio %.3g, max gain %.3g, %.1f s",
                                       max_ratio, max_gain, t));
}

void criterion_properties() {
  const std::string cmd = std::string(TTORTHO_PROPERTY_TEST) + " --gtest_brief=1 > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  report("7 property suites", rc == 0, "property_test exit status " + std::to_string(rc));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "ttortho_acceptance";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  GenConfig g;
  g.order = 3;
  g.mode_size = 8;
  g.count = 10;
  std::string gen[2], csv[2];
  bool rc_ok = true;
  for (int i = 0; i < 2; ++i) {
    g.output = dir / ("gen" + std::to_string(i) + ".ttv");
    rc_ok = rc_ok && cmd_gen(g) == 0;
    gen[i] = slurp(g.output);
    RunConfig r;
    r.input = g.output;
    r.deltas = {1e-4, 1e-8};
    r.with_kappa = true;
    r.jobs = 1 + 2 * static_cast<unsigned>(i);
    r.csv = dir / ("run" + std::to_string(i) + ".csv");
    rc_ok = rc_ok && cmd_run(r) == 0;
    csv[i] = slurp(r.csv);
  }
  const bool ok = rc_ok && !gen[0].empty() && gen[0] == gen[1] && !csv[0].empty() && csv[0] == csv[1];
  report("8 determinism", ok,
         "gen " + std::to_string(gen[0].size()) + " bytes, csv " + std::to_string(csv[0].size()) +
             " bytes, identical: " + (gen[0] == gen[1] && csv[0] == csv[1] ? "yes" : "no"));
  std::filesystem::remove_all(dir);
}

}  // namespace

int main() {
  criterion_rounding();
  criterion_oracle();
  criterion_counts();
  criterion_loo_curves();
  criterion_gram_breakdown();
  criterion_memory(TTORTHO_MEMORY_ORDER, TTORTHO_MEMORY_MODE, TTORTHO_MEMORY_COUNT);
  criterion_properties();
  criterion_determinism();
  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
