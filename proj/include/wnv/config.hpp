#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wnv/baselines.hpp"
#include "wnv/channel.hpp"
#include "wnv/demand.hpp"

namespace wnv {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SweepAxis { kPw, kTheta, kNc, kKc, kEh };

struct ExperimentConfig {
  TopologyConfig topology;

  struct Physics {
    double p_max_dbm = 33.0;
    double noise_density_dbm_hz = -174.0;
    double noise_figure_db = 10.0;
    double bandwidth_hz = 15000.0;
    double shadowing_sigma_db = 8.0;
  } physics;

  struct Solver {
    std::vector<double> theta{0.5};
    bool p_w_auto = true;
    std::vector<double> p_w_dbm;  // used when p_w_auto is false
    double bisection_rel_tol = 1e-9;
    int max_bisection_iters = 200;
  } solver;

  struct Sweep {
    SweepAxis axis = SweepAxis::kTheta;
    std::vector<double> values;
  } sweep;

  struct MonteCarlo {
    int num_drops = 1;
    std::uint64_t master_seed = 1;
    bool parallel = false;
  } monte_carlo;

  std::vector<Scheme> schemes{Scheme::kProposed};
  std::vector<PrecoderKind> sp_precoders;  // one per SP
  double csi_error = 0.0;                  // e_H scale, 0 = perfect CSI

  double p_max_w() const;
  double noise_w() const;  // full-band noise power
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& cfg);

/// Human-readable dump of resolved watt-domain values and derived seeds.
std::string describe_resolved(const ExperimentConfig& cfg);

std::string scheme_name(Scheme scheme);
std::string axis_name(SweepAxis axis);
std::string precoder_name(PrecoderKind kind);

}  // namespace wnv
