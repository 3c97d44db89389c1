#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "ttortho/experiment.hpp"
#include "ttortho/ortho.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Tensor-train orthogonalization experiments"};
  app.require_subcommand(1);

  ttortho::GenConfig gen;
  std::string gen_output;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Write the Krylov input set as TTV1 records");
  gen_cmd->add_option("--order", gen.order, "Tensor order d")->capture_default_str();
  gen_cmd->add_option("--mode-size", gen.mode_size, "Mode size n")->capture_default_str();
  gen_cmd->add_option("--count", gen.count, "Number of vectors m")->capture_default_str();
  gen_cmd->add_option("--output", gen_output, "Output file")->required();

  ttortho::RunConfig run;
  std::size_t run_count = 0;
  std::vector<std::string> kernel_names;
  std::string input, csv, svg_dir;
  CLI::App* run_cmd = app.add_subcommand("run", "Orthogonalize and write the metrics CSV");
  run_cmd->add_option("--order", run.order, "Tensor order d (with --seed-free)")
      ->capture_default_str();
  run_cmd->add_option("--mode-size", run.mode_size, "Mode size n (with --seed-free)")
      ->capture_default_str();
  CLI::Option* count_opt = run_cmd->add_option("--count", run_count, "Number of input vectors");
  run_cmd->add_option("--kernels", kernel_names, "Comma-separated kernels")->delimiter(',');
  run_cmd->add_option("--deltas", run.deltas, "Comma-separated rounding accuracies")
      ->delimiter(',');
  CLI::Option* input_opt = run_cmd->add_option("--input", input, "TTV1 set file");
  CLI::Option* fresh_opt =
      run_cmd->add_flag("--seed-free", run.generate, "Generate the Krylov inputs in-process");
  input_opt->excludes(fresh_opt);
  run_cmd->add_option("--csv", csv, "CSV output file")->required();
  run_cmd->add_option("--svg-dir", svg_dir, "Also write SVG plots here");
  run_cmd->add_flag("--with-kappa", run.with_kappa, "Add condition numbers of the inputs");
  run_cmd->add_option("--jobs", run.jobs, "Parallel (kernel, delta) runs")->capture_default_str();

  std::string plot_csv, plot_dir;
  CLI::App* plot_cmd = app.add_subcommand("plot", "Render SVG plots from a CSV");
  plot_cmd->add_option("--csv", plot_csv, "CSV written by run")->required();
  plot_cmd->add_option("--svg-dir", plot_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ttortho::kExitConfig;
  }

  if (*gen_cmd) {
    gen.output = gen_output;
    return ttortho::cmd_gen(gen);
  }
  if (*run_cmd) {
    if (!kernel_names.empty()) {
      run.kernels.clear();
      for (const std::string& name : kernel_names) {
        const auto k = ttortho::parse_kernel(name);
        if (!k) {
          std::cerr << "run: unknown kernel '" << name << "'\n";
          return ttortho::kExitConfig;
        }
        run.kernels.push_back(*k);
      }
    }
    if (*count_opt) run.count = run_count;
    if (*input_opt) run.input = input;
    run.csv = csv;
    if (!svg_dir.empty()) run.svg_dir = svg_dir;
    return ttortho::cmd_run(run);
  }
  return ttortho::cmd_plot(plot_csv, plot_dir);
}
