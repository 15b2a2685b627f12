#include "wnv/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wnv/metrics.hpp"
#include "wnv/rng.hpp"

namespace wnv {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config: " + field + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + key, "missing");
  return *it;
}

double get_number(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) fail(path + key, "expected a number");
  return v.get<double>();
}

double opt_number(const json& j, const char* key, const std::string& path, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) fail(path + key, "expected a number");
  return it->get<double>();
}

int get_int(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer()) fail(path + key, "expected an integer");
  return v.get<int>();
}

std::vector<double> number_or_list(const json& v, const std::string& field) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const json& e : v) {
      if (!e.is_number()) fail(field, "expected numbers");
      out.push_back(e.get<double>());
    }
  } else {
    fail(field, "expected a number or an array of numbers");
  }
  if (out.empty()) fail(field, "empty list");
  return out;
}

Scheme parse_scheme(const std::string& name) {
  if (name == "PROPOSED") return Scheme::kProposed;
  if (name == "VIRTUAL_ONLY") return Scheme::kVirtualOnly;
  if (name == "COOP_ZF") return Scheme::kCoopZf;
  if (name == "FD") return Scheme::kFd;
  fail("schemes", "unknown scheme '" + name + "'");
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "P_W") return SweepAxis::kPw;
  if (name == "THETA") return SweepAxis::kTheta;
  if (name == "N_C") return SweepAxis::kNc;
  if (name == "K_C") return SweepAxis::kKc;
  if (name == "E_H") return SweepAxis::kEh;
  fail("sweep.axis", "unknown axis '" + name + "' (one of P_W, THETA, N_C, K_C, E_H)");
}

PrecoderKind parse_precoder(const std::string& name) {
  if (name == "MRT") return PrecoderKind::kMrt;
  if (name == "ZF") return PrecoderKind::kZf;
  fail("sp_precoders", "unknown precoder kind '" + name + "' (MRT or ZF)");
}

}  // namespace

double ExperimentConfig::p_max_w() const { return dbm_to_watt(physics.p_max_dbm); }

double ExperimentConfig::noise_w() const {
  return noise_power_watt(physics.noise_density_dbm_hz, physics.bandwidth_hz,
                          physics.noise_figure_db);
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;

  const json& topo = require(root, "topology", "");
  cfg.topology.cells = get_int(topo, "cells", "topology.");
  cfg.topology.cell_radius_m = get_number(topo, "cell_radius_m", "topology.");
  cfg.topology.antennas_per_cell = get_int(topo, "antennas_per_cell", "topology.");
  cfg.topology.num_sps = get_int(topo, "num_sps", "topology.");
  cfg.topology.users_per_sp = get_int(topo, "users_per_sp", "topology.");
  cfg.topology.exclusion_radius_m =
      opt_number(topo, "exclusion_radius_m", "topology.", cfg.topology.exclusion_radius_m);

  if (auto it = root.find("physics"); it != root.end()) {
    const json& ph = *it;
    cfg.physics.p_max_dbm = opt_number(ph, "p_max_dbm", "physics.", cfg.physics.p_max_dbm);
    cfg.physics.noise_density_dbm_hz =
        opt_number(ph, "noise_density_dbm_hz", "physics.", cfg.physics.noise_density_dbm_hz);
    cfg.physics.noise_figure_db =
        opt_number(ph, "noise_figure_db", "physics.", cfg.physics.noise_figure_db);
    cfg.physics.bandwidth_hz = opt_number(ph, "bandwidth_hz", "physics.", cfg.physics.bandwidth_hz);
    cfg.physics.shadowing_sigma_db =
        opt_number(ph, "shadowing_sigma_db", "physics.", cfg.physics.shadowing_sigma_db);
  }

  if (auto it = root.find("solver"); it != root.end()) {
    const json& sv = *it;
    if (auto th = sv.find("theta"); th != sv.end()) {
      cfg.solver.theta = number_or_list(*th, "solver.theta");
    }
    if (auto pw = sv.find("p_w_dbm"); pw != sv.end()) {
      if (pw->is_string()) {
        if (pw->get<std::string>() != "auto") fail("solver.p_w_dbm", "expected \"auto\" or numbers");
        cfg.solver.p_w_auto = true;
      } else {
        cfg.solver.p_w_auto = false;
        cfg.solver.p_w_dbm = number_or_list(*pw, "solver.p_w_dbm");
      }
    }
    cfg.solver.bisection_rel_tol =
        opt_number(sv, "bisection_rel_tol", "solver.", cfg.solver.bisection_rel_tol);
    if (auto mi = sv.find("max_bisection_iters"); mi != sv.end()) {
      cfg.solver.max_bisection_iters = mi->get<int>();
    }
  }

  const json& sweep = require(root, "sweep", "");
  const json& axis = require(sweep, "axis", "sweep.");
  if (!axis.is_string()) fail("sweep.axis", "expected a string");
  cfg.sweep.axis = parse_axis(axis.get<std::string>());
  cfg.sweep.values = number_or_list(require(sweep, "values", "sweep."), "sweep.values");

  const json& mc = require(root, "monte_carlo", "");
  cfg.monte_carlo.num_drops = get_int(mc, "num_drops", "monte_carlo.");
  if (auto it = mc.find("master_seed"); it != mc.end()) {
    if (!it->is_number_unsigned() && !it->is_number_integer()) {
      fail("monte_carlo.master_seed", "expected an integer");
    }
    cfg.monte_carlo.master_seed = it->get<std::uint64_t>();
  }
  if (auto it = mc.find("parallel"); it != mc.end()) {
    if (!it->is_boolean()) fail("monte_carlo.parallel", "expected a boolean");
    cfg.monte_carlo.parallel = it->get<bool>();
  }

  const json& schemes = require(root, "schemes", "");
  if (!schemes.is_array() || schemes.empty()) fail("schemes", "expected a nonempty array");
  cfg.schemes.clear();
  for (const json& s : schemes) {
    if (!s.is_string()) fail("schemes", "expected strings");
    cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
  }

  cfg.sp_precoders.clear();
  if (auto it = root.find("sp_precoders"); it != root.end()) {
    if (it->is_string()) {
      cfg.sp_precoders.assign(cfg.topology.num_sps, parse_precoder(it->get<std::string>()));
    } else if (it->is_array()) {
      for (const json& s : *it) {
        if (!s.is_string()) fail("sp_precoders", "expected strings");
        cfg.sp_precoders.push_back(parse_precoder(s.get<std::string>()));
      }
    } else {
      fail("sp_precoders", "expected a string or an array of strings");
    }
  } else {
    cfg.sp_precoders.assign(std::max(cfg.topology.num_sps, 1), PrecoderKind::kZf);
  }

  cfg.csi_error = opt_number(root, "csi_error", "", 0.0);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  const TopologyConfig& t = cfg.topology;
  if (t.cells != 1 && t.cells != 3 && t.cells != 7 && t.cells != 19) {
    fail("topology.cells",
         "hex layout supports 1, 3, 7 or 19 cells, got " + std::to_string(t.cells));
  }
  if (t.cell_radius_m <= 0.0) fail("topology.cell_radius_m", "must be positive");
  if (t.antennas_per_cell < 1) fail("topology.antennas_per_cell", "must be >= 1");
  if (t.num_sps < 1) fail("topology.num_sps", "must be >= 1");
  if (t.users_per_sp < 1) fail("topology.users_per_sp", "must be >= 1");
  if (t.exclusion_radius_m < 0.0) fail("topology.exclusion_radius_m", "must be >= 0");
  if (cfg.physics.bandwidth_hz <= 0.0) fail("physics.bandwidth_hz", "must be positive");
  if (cfg.physics.shadowing_sigma_db < 0.0) fail("physics.shadowing_sigma_db", "must be >= 0");

  for (double th : cfg.solver.theta) {
    if (!(th > 0.0 && th < 1.0)) {
      fail("solver.theta", "values must lie in the open interval (0,1), got " +
                               std::to_string(th));
    }
  }
  if (!cfg.solver.p_w_auto) {
    for (double pw : cfg.solver.p_w_dbm) {
      if (pw > cfg.physics.p_max_dbm + 1e-9) {
        fail("solver.p_w_dbm", "virtual power above p_max_dbm");
      }
    }
  }
  if (!(cfg.solver.bisection_rel_tol > 0.0)) fail("solver.bisection_rel_tol", "must be positive");
  if (cfg.solver.max_bisection_iters < 1) fail("solver.max_bisection_iters", "must be >= 1");

  if (cfg.sweep.values.empty()) fail("sweep.values", "empty");
  switch (cfg.sweep.axis) {
    case SweepAxis::kPw:
      for (double v : cfg.sweep.values) {
        if (v > cfg.physics.p_max_dbm + 1e-9) fail("sweep.values", "P_W value above p_max_dbm");
      }
      break;
    case SweepAxis::kTheta:
      for (double v : cfg.sweep.values) {
        if (!(v > 0.0 && v < 1.0)) fail("sweep.values", "THETA values must lie in (0,1)");
      }
      break;
    case SweepAxis::kNc:
      for (double v : cfg.sweep.values) {
        if (v < 1.0 || v != std::floor(v)) fail("sweep.values", "N_C values must be integers >= 1");
      }
      break;
    case SweepAxis::kKc:
      for (double v : cfg.sweep.values) {
        if (v < 1.0 || v != std::floor(v)) fail("sweep.values", "K_C values must be integers >= 1");
        const int kc = static_cast<int>(v);
        if (kc % t.num_sps != 0) {
          fail("sweep.values", "K_C value " + std::to_string(kc) +
                                   " not divisible by num_sps = " + std::to_string(t.num_sps));
        }
      }
      break;
    case SweepAxis::kEh:
      for (double v : cfg.sweep.values) {
        if (v < 0.0) fail("sweep.values", "E_H values must be >= 0");
      }
      break;
  }

  if (cfg.monte_carlo.num_drops < 1) fail("monte_carlo.num_drops", "must be >= 1");
  if (cfg.schemes.empty()) fail("schemes", "empty");
  if (static_cast<int>(cfg.sp_precoders.size()) != t.num_sps) {
    fail("sp_precoders", "need one entry per SP (" + std::to_string(t.num_sps) + ")");
  }
  if (cfg.csi_error < 0.0) fail("csi_error", "must be >= 0");
}

std::string describe_resolved(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os.precision(10);
  os << "p_max: " << cfg.physics.p_max_dbm << " dBm = " << cfg.p_max_w() << " W\n";
  os << "noise power (full band): " << cfg.noise_w() << " W ("
     << watt_to_dbm(cfg.noise_w()) << " dBm)\n";
  os << "virtual power: ";
  if (cfg.solver.p_w_auto) {
    os << "AUTO (per-cell closed-form rule)\n";
  } else {
    os << "[";
    for (std::size_t i = 0; i < cfg.solver.p_w_dbm.size(); ++i) {
      os << (i ? ", " : "") << dbm_to_watt(cfg.solver.p_w_dbm[i]) << " W";
    }
    os << "]\n";
  }
  os << "theta grid: [";
  for (std::size_t i = 0; i < cfg.solver.theta.size(); ++i) {
    os << (i ? ", " : "") << cfg.solver.theta[i];
  }
  os << "]\n";
  os << "sweep: " << axis_name(cfg.sweep.axis) << " with " << cfg.sweep.values.size()
     << " values, " << cfg.monte_carlo.num_drops << " drops\n";
  os << "derived seeds (drop 0): topology=" << derive_seed(cfg.monte_carlo.master_seed, 0, "topology")
     << " channels=" << derive_seed(cfg.monte_carlo.master_seed, 0, "channels")
     << " csi=" << derive_seed(cfg.monte_carlo.master_seed, 0, "csi") << "\n";
  return os.str();
}

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kProposed: return "PROPOSED";
    case Scheme::kVirtualOnly: return "VIRTUAL_ONLY";
    case Scheme::kCoopZf: return "COOP_ZF";
    case Scheme::kFd: return "FD";
  }
  return "?";
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kPw: return "P_W";
    case SweepAxis::kTheta: return "THETA";
    case SweepAxis::kNc: return "N_C";
    case SweepAxis::kKc: return "K_C";
    case SweepAxis::kEh: return "E_H";
  }
  return "?";
}

std::string precoder_name(PrecoderKind kind) {
  return kind == PrecoderKind::kMrt ? "MRT" : "ZF";
}

}  // namespace wnv
