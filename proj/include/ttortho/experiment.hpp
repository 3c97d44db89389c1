#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttortho/metrics.hpp"
#include "ttortho/ortho.hpp"
#include "ttortho/tt.hpp"

namespace ttortho {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitKernelFailure = 3,
  kExitIo = 4,
};

inline constexpr std::string_view kCsvHeader =
    "kernel,delta,k,loo,max_rank,storage_count,compression_ratio,compression_gain,kappa,"
    "kappa_sq,rounding_calls,error";

struct GenConfig {
  std::size_t order = 3;
  std::size_t mode_size = 15;
  std::size_t count = 20;
  std::filesystem::path output;
};

struct RunConfig {
  std::size_t order = 3;
  std::size_t mode_size = 15;
  /// With an input file, nullopt uses every stored vector.
  std::optional<std::size_t> count;
  std::vector<Kernel> kernels{std::begin(kAllKernels), std::end(kAllKernels)};
  std::vector<double> deltas{1e-3, 1e-5, 1e-8};
  std::optional<std::filesystem::path> input;
  /// Build the Krylov inputs in-process instead of reading `input`.
  bool generate = false;
  std::filesystem::path csv;
  std::optional<std::filesystem::path> svg_dir;
  bool with_kappa = false;
  std::size_t densify_cap = kDefaultDensifyCap;
  unsigned jobs = 1;
};

/// One CSV line. `kernel` is a kernel name, or "householder:u" / "householder:a" for the
/// Householder vectors and rounded inputs.
struct CsvRecord {
  std::string kernel;
  double delta = 0.0;
  std::size_t k = 0;
  std::optional<double> loo;
  std::optional<std::size_t> max_rank;
  std::optional<std::size_t> storage_count;
  std::optional<double> compression_ratio;
  std::optional<double> compression_gain;
  std::optional<double> kappa;
  std::optional<double> kappa_sq;
  std::optional<std::size_t> rounding_calls;
  std::string error;

  friend bool operator==(const CsvRecord&, const CsvRecord&) = default;
};

/// Shortest round-trip decimal form.
std::string format_double(double v);

std::string format_csv(std::span<const CsvRecord> records);
/// Throws SchemaError on a wrong header, field count or unparsable field.
std::vector<CsvRecord> parse_csv(std::string_view text);

/// Rows of one (kernel, delta) run: k = 1..m, the Householder extra series, and a final
/// error row when the kernel failed.
struct SeriesOutcome {
  std::vector<CsvRecord> records;
  bool failed = false;
};

/// `kappa` holds per-prefix condition numbers or is empty.
SeriesOutcome run_series(Kernel kernel, double delta, std::span<const TTVector> inputs,
                         std::span<const Conditioning> kappa = {});

struct RunReport {
  std::vector<CsvRecord> records;
  bool kernel_failure = false;
};

/// Every (kernel, delta) pair, ordered as listed in the config whatever `jobs` is.
RunReport run_experiments(std::span<const TTVector> inputs, const RunConfig& cfg);

/// Throws std::invalid_argument for an unusable config.
void validate(const RunConfig& cfg);
std::vector<TTVector> load_inputs(const RunConfig& cfg);

int cmd_gen(const GenConfig& cfg);
int cmd_run(const RunConfig& cfg);
int cmd_plot(const std::filesystem::path& csv, const std::filesystem::path& svg_dir);

}  // namespace ttortho
