// Command-line front end: validate configs, solve single instances, run sweeps.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wnv/config.hpp"
#include "wnv/experiment.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<int> drops;
  std::optional<std::uint64_t> seed;
  std::optional<bool> parallel;
};

wnv::ExperimentConfig load_with_overrides(const CommonOpts& opts) {
  wnv::ExperimentConfig cfg = wnv::load_config(opts.config_path);
  if (opts.drops) cfg.monte_carlo.num_drops = *opts.drops;
  if (opts.seed) cfg.monte_carlo.master_seed = *opts.seed;
  if (opts.parallel) cfg.monte_carlo.parallel = *opts.parallel;
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON experiment config")->required();
  cmd->add_option("--drops", [&opts](const CLI::results_t& r) {
    opts.drops = std::stoi(r[0]);
    return true;
  }, "Override monte_carlo.num_drops");
  cmd->add_option("--seed", [&opts](const CLI::results_t& r) {
    opts.seed = std::stoull(r[0]);
    return true;
  }, "Override monte_carlo.master_seed");
  cmd->add_flag("--parallel,!--no-parallel", [&opts](std::int64_t count) {
    opts.parallel = count > 0;
  }, "Override monte_carlo.parallel");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-cell MIMO network virtualization precoding simulator"};
  app.require_subcommand(1);

  CommonOpts validate_opts, solve_opts, sweep_opts;
  int solve_drop = 0;
  std::string out_csv = "sweep.csv";
  std::string out_diag;

  CLI::App* validate = app.add_subcommand("validate", "Parse a config and print resolved values");
  add_common(validate, validate_opts);

  CLI::App* solve = app.add_subcommand("solve", "Solve one instance and dump diagnostics");
  add_common(solve, solve_opts);
  solve->add_option("--drop", solve_drop, "Drop index to solve")->capture_default_str();

  CLI::App* sweep = app.add_subcommand("sweep", "Run the configured sweep and write CSV");
  add_common(sweep, sweep_opts);
  sweep->add_option("--out", out_csv, "Output CSV path")->capture_default_str();
  sweep->add_option("--diag", out_diag, "Diagnostics JSONL path (default: <out>.diag.jsonl)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      const wnv::ExperimentConfig cfg = load_with_overrides(validate_opts);
      wnv::validate_config(cfg);
      std::cout << wnv::describe_resolved(cfg);
      return 0;
    }
    if (solve->parsed()) {
      const wnv::ExperimentConfig cfg = load_with_overrides(solve_opts);
      try {
        std::cout << wnv::solve_instance_dump(cfg, solve_drop);
      } catch (const wnv::ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
      }
      return 0;
    }
    const wnv::ExperimentConfig cfg = load_with_overrides(sweep_opts);
    wnv::ExperimentResult result;
    try {
      result = wnv::run_experiment(cfg);
    } catch (const wnv::ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      std::cerr << "solver error: " << e.what() << "\n";
      return 2;
    }
    std::ofstream csv(out_csv);
    if (!csv) {
      std::cerr << "cannot write " << out_csv << "\n";
      return 1;
    }
    csv << wnv::to_csv(result.rows);
    const std::string diag_path = out_diag.empty() ? out_csv + ".diag.jsonl" : out_diag;
    std::ofstream diag(diag_path);
    if (!diag) {
      std::cerr << "cannot write " << diag_path << "\n";
      return 1;
    }
    diag << wnv::to_jsonl(result.diags);
    std::cout << "wrote " << result.rows.size() << " rows to " << out_csv << "\n";
    return 0;
  } catch (const wnv::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
