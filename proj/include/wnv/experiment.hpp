#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wnv/config.hpp"

namespace wnv {

struct ResultRow {
  std::string sweep_axis;
  double value = 0.0;
  std::string scheme;
  std::optional<double> theta;          // empty for COOP_ZF
  std::optional<double> p_w_mean_w;     // drop/cell mean, empty for COOP_ZF
  double r_bar = 0.0;
  double r_min_bar = 0.0;
  std::optional<double> leakage_mean_w;    // empty where undefined
  std::optional<double> deviation_mean_w;  // empty where undefined
  int num_drops = 0;
  std::uint64_t seed = 0;
};

struct DiagRecord {
  std::string sweep_axis;
  double value = 0.0;
  std::string scheme;
  std::optional<double> theta;
  long closed_form_count = 0;
  long ridge_count = 0;
  std::optional<double> lambda_min;
  std::optional<double> lambda_max;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<DiagRecord> diags;
};

/// Runs the configured sweep: per sweep value and drop, regenerates the
/// network from derived seeds, solves every requested scheme, evaluates on
/// true channels and averages over drops.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string to_csv(const std::vector<ResultRow>& rows);
std::string to_jsonl(const std::vector<DiagRecord>& diags);

/// Solves drop `drop` of the configured instance once and dumps per-cell
/// solver diagnostics as JSON.
std::string solve_instance_dump(const ExperimentConfig& cfg, int drop);

}  // namespace wnv
