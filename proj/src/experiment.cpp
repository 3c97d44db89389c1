#include "ttortho/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <iostream>
#include <map>
#include <stdexcept>
#include <system_error>
#include <thread>

#include "file_util.hpp"
#include "ttortho/errors.hpp"
#include "ttortho/generators.hpp"
#include "ttortho/plot.hpp"
#include "ttortho/ttv_io.hpp"

namespace ttortho {

namespace {

constexpr std::size_t kCsvFields = 12;

std::size_t max_of(const std::vector<std::size_t>& ranks) {
  return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end());
}

std::string csv_safe(std::string_view text) {
  std::string out(text);
  for (char& c : out)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return out;
}

void append_field(std::string& line, const std::optional<double>& v) {
  line += ',';
  if (v) line += format_double(*v);
}

void append_field(std::string& line, const std::optional<std::size_t>& v) {
  line += ',';
  if (v) line += std::to_string(*v);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw SchemaError("csv line " + std::to_string(line_no) + ": bad number '" +
                      std::string(field) + "'");
  return v;
}

std::size_t parse_size(std::string_view field, std::size_t line_no) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw SchemaError("csv line " + std::to_string(line_no) + ": bad integer '" +
                      std::string(field) + "'");
  return v;
}

std::optional<double> opt_double(std::string_view field, std::size_t line_no) {
  if (field.empty()) return std::nullopt;
  return parse_double(field, line_no);
}

std::optional<std::size_t> opt_size(std::string_view field, std::size_t line_no) {
  if (field.empty()) return std::nullopt;
  return parse_size(field, line_no);
}

// The rounding call whose output became q_k, for the kernels that round q or its residual.
bool produces_q(const std::string& series) {
  return series == "p" || series == "p2" || series == "q";
}

CsvRecord memory_record(std::string kernel, double delta, const RoundingEvent& e,
                        std::size_t dense) {
  CsvRecord rec;
  rec.kernel = std::move(kernel);
  rec.delta = delta;
  rec.k = e.index + 1;
  rec.max_rank = max_of(e.ranks_after);
  rec.storage_count = e.storage_after;
  rec.compression_ratio = static_cast<double>(e.storage_after) / static_cast<double>(dense);
  rec.compression_gain = compression_gain(e.storage_before, e.storage_after);
  rec.rounding_calls = e.call;
  return rec;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: buffer too small");
  return std::string(buf, ptr);
}

std::string format_csv(std::span<const CsvRecord> records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const CsvRecord& r : records) {
    std::string line = csv_safe(r.kernel);
    line += ',';
    line += format_double(r.delta);
    line += ',';
    line += std::to_string(r.k);
    append_field(line, r.loo);
    append_field(line, r.max_rank);
    append_field(line, r.storage_count);
    append_field(line, r.compression_ratio);
    append_field(line, r.compression_gain);
    append_field(line, r.kappa);
    append_field(line, r.kappa_sq);
    append_field(line, r.rounding_calls);
    line += ',';
    line += csv_safe(r.error);
    out += line;
    out += '\n';
  }
  return out;
}

std::vector<CsvRecord> parse_csv(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (std::string_view& l : lines)
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  if (lines.empty()) throw SchemaError("csv: empty input");
  if (lines.front() != kCsvHeader) throw SchemaError("csv: unexpected header");

  std::vector<CsvRecord> out;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    const std::vector<std::string_view> f = split(lines[n], ',');
    if (f.size() != kCsvFields)
      throw SchemaError("csv line " + std::to_string(line_no) + ": expected " +
                        std::to_string(kCsvFields) + " fields, got " + std::to_string(f.size()));
    CsvRecord r;
    r.kernel = std::string(f[0]);
    if (r.kernel.empty()) throw SchemaError("csv line " + std::to_string(line_no) + ": no kernel");
    r.delta = parse_double(f[1], line_no);
    r.k = parse_size(f[2], line_no);
    r.loo = opt_double(f[3], line_no);
    r.max_rank = opt_size(f[4], line_no);
    r.storage_count = opt_size(f[5], line_no);
    r.compression_ratio = opt_double(f[6], line_no);
    r.compression_gain = opt_double(f[7], line_no);
    r.kappa = opt_double(f[8], line_no);
    r.kappa_sq = opt_double(f[9], line_no);
    r.rounding_calls = opt_size(f[10], line_no);
    r.error = std::string(f[11]);
    out.push_back(std::move(r));
  }
  return out;
}

SeriesOutcome run_series(Kernel kernel, double delta, std::span<const TTVector> inputs,
                         std::span<const Conditioning> kappa) {
  if (inputs.empty()) throw std::invalid_argument("run_series: no inputs");
  const std::string name(kernel_name(kernel));
  OrthoOptions opts;
  opts.delta = delta;

  OrthoResult res;
  std::string error;
  SeriesOutcome outcome;
  try {
    res = orthogonalize(kernel, inputs, opts);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::runtime_error& e) {
    if (const auto* partial = dynamic_cast<const PartialResult*>(&e)) res = partial->partial();
    error = e.what();
    outcome.failed = true;
  }

  std::map<std::size_t, const RoundingEvent*> q_events;
  for (const RoundingEvent& e : res.events)
    if (produces_q(e.series)) q_events[e.index] = &e;

  const double dense = static_cast<double>(dense_size(inputs.front()));
  OrthogonalityTracker tracker;
  for (std::size_t i = 0; i < res.q.size(); ++i) {
    const TTVector& q = res.q[i];
    CsvRecord rec;
    rec.kernel = name;
    rec.delta = delta;
    rec.k = i + 1;
    rec.loo = tracker.push(q);
    rec.max_rank = q.max_rank();
    rec.storage_count = storage_count(q);
    rec.compression_ratio = static_cast<double>(storage_count(q)) / dense;
    if (auto it = q_events.find(i); it != q_events.end()) {
      rec.compression_gain = compression_gain(it->second->storage_before, it->second->storage_after);
      rec.rounding_calls = it->second->call;
    }
    if (i < kappa.size()) {
      rec.kappa = kappa[i].kappa;
      rec.kappa_sq = kappa[i].kappa_sq;
    }
    outcome.records.push_back(std::move(rec));
  }

  if (kernel == Kernel::householder) {
    const std::size_t dense_n = dense_size(inputs.front());
    for (const RoundingEvent& e : res.events)
      if (e.series == "u") outcome.records.push_back(memory_record(name + ":u", delta, e, dense_n));
    CsvRecord first;
    first.kernel = name + ":a";
    first.delta = delta;
    first.k = 1;
    first.max_rank = inputs.front().max_rank();
    first.storage_count = storage_count(inputs.front());
    first.compression_ratio = static_cast<double>(*first.storage_count) / dense;
    first.compression_gain = 1.0;
    first.rounding_calls = 0;
    outcome.records.push_back(std::move(first));
    for (const RoundingEvent& e : res.events)
      if (e.series == "a") outcome.records.push_back(memory_record(name + ":a", delta, e, dense_n));
  }

  if (outcome.failed) {
    CsvRecord rec;
    rec.kernel = name;
    rec.delta = delta;
    rec.k = std::max(res.q.size(), res.householder_vectors.size()) + 1;
    rec.rounding_calls = res.rounding_calls;
    rec.error = error.empty() ? "kernel failure" : error;
    outcome.records.push_back(std::move(rec));
  }
  return outcome;
}

RunReport run_experiments(std::span<const TTVector> inputs, const RunConfig& cfg) {
  std::vector<Conditioning> kappa;
  if (cfg.with_kappa) {
    try {
      kappa = condition_series(inputs, cfg.densify_cap);
    } catch (const TooLargeToDensify&) {
      kappa.clear();
    }
  }

  struct Task {
    Kernel kernel;
    double delta;
  };
  std::vector<Task> tasks;
  for (Kernel k : cfg.kernels)
    for (double d : cfg.deltas) tasks.push_back({k, d});

  std::vector<SeriesOutcome> outcomes(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      try {
        outcomes[t] = run_series(tasks[t].kernel, tasks[t].delta, inputs, kappa);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const unsigned jobs =
      static_cast<unsigned>(std::clamp<std::size_t>(cfg.jobs, 1, std::max<std::size_t>(tasks.size(), 1)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  RunReport report;
  for (SeriesOutcome& o : outcomes) {
    report.kernel_failure = report.kernel_failure || o.failed;
    for (CsvRecord& r : o.records) report.records.push_back(std::move(r));
  }
  return report;
}

void validate(const RunConfig& cfg) {
  if (cfg.kernels.empty()) throw std::invalid_argument("no kernels selected");
  if (cfg.deltas.empty()) throw std::invalid_argument("no deltas given");
  for (double d : cfg.deltas)
    if (!(d > 0.0 && d < 1.0))
      throw std::invalid_argument("delta " + format_double(d) + " is not in (0, 1)");
  if (cfg.count && *cfg.count == 0) throw std::invalid_argument("count must be at least 1");
  if (cfg.generate == cfg.input.has_value())
    throw std::invalid_argument("exactly one of --input and --seed-free is required");
  if (cfg.generate && (cfg.order == 0 || cfg.mode_size == 0))
    throw std::invalid_argument("order and mode size must be at least 1");
  if (cfg.csv.empty()) throw std::invalid_argument("no csv output path");
  if (cfg.jobs == 0) throw std::invalid_argument("jobs must be at least 1");
}

std::vector<TTVector> load_inputs(const RunConfig& cfg) {
  if (cfg.generate)
    return krylov_set(KrylovSetSpec{cfg.order, cfg.mode_size, cfg.count.value_or(20)});
  std::vector<TTVector> set = load_ttv_set(*cfg.input);
  if (set.empty()) throw std::invalid_argument("input file holds no vectors");
  if (cfg.count) {
    if (*cfg.count > set.size())
      throw std::invalid_argument("input file holds " + std::to_string(set.size()) +
                                  " vectors, fewer than the requested " +
                                  std::to_string(*cfg.count));
    set.resize(*cfg.count);
  }
  return set;
}

int cmd_gen(const GenConfig& cfg) {
  if (cfg.order == 0 || cfg.mode_size == 0 || cfg.count == 0) {
    std::cerr << "gen: order, mode size and count must be at least 1\n";
    return kExitConfig;
  }
  if (cfg.output.empty()) {
    std::cerr << "gen: no output path\n";
    return kExitConfig;
  }
  std::vector<TTVector> set;
  try {
    set = krylov_set(KrylovSetSpec{cfg.order, cfg.mode_size, cfg.count});
  } catch (const KrylovBreakdown& e) {
    std::cerr << "gen: " << e.what() << '\n';
    return kExitKernelFailure;
  }
  try {
    save_ttv_set(cfg.output, set);
  } catch (const IoError& e) {
    std::cerr << "gen: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

int cmd_run(const RunConfig& cfg) {
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "run: " << e.what() << '\n';
    return kExitConfig;
  }
  std::vector<TTVector> inputs;
  try {
    inputs = load_inputs(cfg);
  } catch (const IoError& e) {
    std::cerr << "run: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "run: " << e.what() << '\n';
    return kExitIo;
  } catch (const KrylovBreakdown& e) {
    std::cerr << "run: " << e.what() << '\n';
    return kExitKernelFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "run: " << e.what() << '\n';
    return kExitConfig;
  }

  RunReport report;
  try {
    report = run_experiments(inputs, cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "run: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    detail::write_text_file(cfg.csv, format_csv(report.records));
    if (cfg.svg_dir) {
      std::filesystem::create_directories(*cfg.svg_dir);
      write_plots(report.records, *cfg.svg_dir);
    }
  } catch (const IoError& e) {
    std::cerr << "run: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "run: " << e.what() << '\n';
    return kExitIo;
  } catch (const SchemaError& e) {
    std::cerr << "run: plot skipped: " << e.what() << '\n';
  }
  for (const CsvRecord& r : report.records)
    if (!r.error.empty())
      std::cerr << "run: " << r.kernel << " delta=" << format_double(r.delta) << ": " << r.error
                << '\n';
  return report.kernel_failure ? kExitKernelFailure : kExitOk;
}

int cmd_plot(const std::filesystem::path& csv, const std::filesystem::path& svg_dir) {
  std::string text;
  try {
    text = detail::read_text_file(csv);
  } catch (const IoError& e) {
    std::cerr << "plot: " << e.what() << '\n';
    return kExitIo;
  }
  try {
    const std::vector<CsvRecord> records = parse_csv(text);
    std::filesystem::create_directories(svg_dir);
    write_plots(records, svg_dir);
  } catch (const SchemaError& e) {
    std::cerr << "plot: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "plot: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "plot: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace ttortho
