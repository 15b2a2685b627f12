#include "wnv/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wnv/metrics.hpp"
#include "wnv/rng.hpp"
#include "wnv/solver.hpp"

namespace wnv {

namespace {

// One drop's aggregate for one (scheme, theta, p_w) combination.
struct DropStats {
  double r_bar = 0.0;
  double r_min_bar = 0.0;
  double leakage_mean = 0.0;
  double deviation_mean = 0.0;
  double p_w_mean = 0.0;
  bool has_leakage = false;
  bool has_p_w = false;
  long closed_form_count = 0;
  long ridge_count = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool has_lambda = false;
};

struct Combo {
  double theta = 0.5;
  std::optional<double> p_w_w;  // empty = AUTO
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string opt_fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

void fold_solutions(DropStats& stats, const std::vector<PrecodingSolution>& sols) {
  double leak = 0.0, dev = 0.0, pw = 0.0;
  for (const PrecodingSolution& sol : sols) {
    leak += sol.leakage_w;
    dev += sol.deviation_w;
    pw += sol.p_w_used_w;
    if (sol.branch == SolveBranch::kClosedForm) {
      ++stats.closed_form_count;
    } else {
      ++stats.ridge_count;
      stats.lambda_min = stats.has_lambda ? std::min(stats.lambda_min, sol.lambda) : sol.lambda;
      stats.lambda_max = stats.has_lambda ? std::max(stats.lambda_max, sol.lambda) : sol.lambda;
      stats.has_lambda = true;
    }
  }
  const double cells = static_cast<double>(sols.size());
  stats.leakage_mean += leak / cells;
  stats.deviation_mean += dev / cells;
  stats.p_w_mean += pw / cells;
  stats.has_leakage = true;
  stats.has_p_w = true;
}

TopologyConfig apply_axis_topology(const ExperimentConfig& cfg, double value) {
  TopologyConfig t = cfg.topology;
  if (cfg.sweep.axis == SweepAxis::kNc) t.antennas_per_cell = static_cast<int>(value);
  if (cfg.sweep.axis == SweepAxis::kKc) {
    t.users_per_sp = static_cast<int>(value) / t.num_sps;
  }
  return t;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);

  const int drops = cfg.monte_carlo.num_drops;
  const std::uint64_t master = cfg.monte_carlo.master_seed;
  const double noise = cfg.noise_w();
  const double p_max = cfg.p_max_w();
  const std::vector<double> alphas(cfg.topology.num_sps, 1.0 / cfg.topology.num_sps);

  ExperimentResult result;
  for (double value : cfg.sweep.values) {
    const TopologyConfig topo_cfg = apply_axis_topology(cfg, value);
    const double e_h = cfg.sweep.axis == SweepAxis::kEh ? value : cfg.csi_error;

    std::vector<double> theta_list = cfg.sweep.axis == SweepAxis::kTheta
                                         ? std::vector<double>{value}
                                         : cfg.solver.theta;
    std::vector<std::optional<double>> pw_list;
    if (cfg.sweep.axis == SweepAxis::kPw) {
      pw_list.push_back(dbm_to_watt(value));
    } else if (cfg.solver.p_w_auto) {
      pw_list.push_back(std::nullopt);
    } else {
      for (double dbm : cfg.solver.p_w_dbm) pw_list.push_back(dbm_to_watt(dbm));
    }
    std::vector<Combo> combos;
    for (double th : theta_list)
      for (const auto& pw : pw_list) combos.push_back({th, pw});

    // stats[scheme][combo][drop]; COOP_ZF only uses combo 0.
    std::vector<std::vector<std::vector<DropStats>>> stats(cfg.schemes.size());
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
      const std::size_t n_combos = cfg.schemes[s] == Scheme::kCoopZf ? 1 : combos.size();
      stats[s].assign(n_combos, std::vector<DropStats>(drops));
    }

    auto run_drop = [&](int drop) {
      const NetworkTopology topo = build_topology(topo_cfg, derive_seed(master, drop, "topology"));
      const ChannelSet true_ch = sample_channels(topo, derive_seed(master, drop, "channels"),
                                                 cfg.physics.shadowing_sigma_db);
      const ChannelSet design_ch =
          e_h > 0.0 ? corrupt_csi(true_ch, e_h, derive_seed(master, drop, "csi")) : true_ch;
      const DemandSet demand = build_demand(design_ch, alphas, cfg.sp_precoders);
      const std::vector<double> p_max_cells(design_ch.num_cells(), p_max);

      for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
        const Scheme scheme = cfg.schemes[s];
        if (scheme == Scheme::kCoopZf) {
          const BaselineResult coop = cooperative_zf(design_ch, true_ch, p_max_cells, noise);
          DropStats& ds = stats[s][0][drop];
          ds.r_bar = coop.eval.r_bar;
          ds.r_min_bar = coop.eval.r_min_bar;
          continue;
        }
        for (std::size_t ci = 0; ci < combos.size(); ++ci) {
          const Combo& combo = combos[ci];
          SolverParams params;
          params.theta = {combo.theta};
          params.p_max_w = {p_max};
          if (combo.p_w_w) params.p_w_w = {*combo.p_w_w};
          params.bisection_rel_tol = cfg.solver.bisection_rel_tol;
          params.max_bisection_iters = cfg.solver.max_bisection_iters;
          DropStats& ds = stats[s][ci][drop];

          if (scheme == Scheme::kProposed) {
            const std::vector<PrecodingSolution> sols = solve_network(design_ch, demand, params);
            std::vector<ComplexMatrix> v;
            v.reserve(sols.size());
            for (const PrecodingSolution& sol : sols) v.push_back(sol.precoder);
            const EvalReport rep = rates(sinr_all(true_ch, v, noise), noise);
            ds.r_bar = rep.r_bar;
            ds.r_min_bar = rep.r_min_bar;
            fold_solutions(ds, sols);
          } else if (scheme == Scheme::kVirtualOnly) {
            std::vector<double> p_w_cells(design_ch.num_cells());
            for (int c = 0; c < design_ch.num_cells(); ++c) {
              p_w_cells[c] = combo.p_w_w
                                 ? *combo.p_w_w
                                 : virtual_power_cell(
                                       effective_channel(design_ch, c, combo.theta),
                                       demand.d_tilde[c], p_max);
            }
            const EvalReport rep = rates(sinr_virtual_only(demand, p_w_cells, noise), noise);
            ds.r_bar = rep.r_bar;
            ds.r_min_bar = rep.r_min_bar;
            ds.p_w_mean += mean(p_w_cells);
            ds.has_p_w = true;
          } else {  // FD
            const BaselineResult fd = fd_leakage_min(design_ch, true_ch, demand, params, noise);
            ds.r_bar = fd.eval.r_bar;
            ds.r_min_bar = fd.eval.r_min_bar;
            for (const auto& per_cell : fd.per_sp) fold_solutions(ds, per_cell);
            // fold_solutions accumulated one mean per SP; renormalize.
            const double sps = static_cast<double>(fd.per_sp.size());
            ds.leakage_mean /= sps;
            ds.deviation_mean /= sps;
            ds.p_w_mean /= sps;
          }
        }
      }
    };

    if (cfg.monte_carlo.parallel && drops > 1) {
      const int workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                          static_cast<unsigned>(drops)));
      std::vector<std::future<std::pair<int, std::string>>> futures;
      futures.reserve(workers);
      for (int w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w]() -> std::pair<int, std::string> {
          for (int d = w; d < drops; d += workers) {
            try {
              run_drop(d);
            } catch (const std::exception& e) {
              return {d, e.what()};
            }
          }
          return {-1, ""};
        }));
      }
      int first_bad = -1;
      std::string first_msg;
      for (auto& f : futures) {
        const auto [bad, msg] = f.get();
        if (bad >= 0 && (first_bad < 0 || bad < first_bad)) {
          first_bad = bad;
          first_msg = msg;
        }
      }
      if (first_bad >= 0) {
        throw std::runtime_error("run_experiment: drop " + std::to_string(first_bad) + ", value " +
                                 fmt(value) + ": " + first_msg);
      }
    } else {
      for (int d = 0; d < drops; ++d) {
        try {
          run_drop(d);
        } catch (const std::exception& e) {
          throw std::runtime_error("run_experiment: drop " + std::to_string(d) + ", value " +
                                   fmt(value) + ": " + e.what());
        }
      }
    }

    // Aggregate drops in index order so parallel runs stay byte-identical.
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
      const Scheme scheme = cfg.schemes[s];
      const std::size_t n_combos = stats[s].size();
      for (std::size_t ci = 0; ci < n_combos; ++ci) {
        const std::vector<DropStats>& per_drop = stats[s][ci];
        ResultRow row;
        row.sweep_axis = axis_name(cfg.sweep.axis);
        row.value = value;
        row.scheme = scheme_name(scheme);
        row.num_drops = drops;
        row.seed = master;
        DiagRecord diag;
        diag.sweep_axis = row.sweep_axis;
        diag.value = value;
        diag.scheme = row.scheme;

        double r_bar = 0.0, r_min = 0.0, leak = 0.0, dev = 0.0, pw = 0.0;
        bool has_leak = true, has_pw = true, has_lambda = false;
        double lmin = 0.0, lmax = 0.0;
        for (const DropStats& ds : per_drop) {
          r_bar += ds.r_bar;
          r_min += ds.r_min_bar;
          leak += ds.leakage_mean;
          dev += ds.deviation_mean;
          pw += ds.p_w_mean;
          has_leak = has_leak && ds.has_leakage;
          has_pw = has_pw && ds.has_p_w;
          diag.closed_form_count += ds.closed_form_count;
          diag.ridge_count += ds.ridge_count;
          if (ds.has_lambda) {
            lmin = has_lambda ? std::min(lmin, ds.lambda_min) : ds.lambda_min;
            lmax = has_lambda ? std::max(lmax, ds.lambda_max) : ds.lambda_max;
            has_lambda = true;
          }
        }
        const double n = static_cast<double>(drops);
        row.r_bar = r_bar / n;
        row.r_min_bar = r_min / n;
        if (scheme != Scheme::kCoopZf) {
          row.theta = combos[ci].theta;
          diag.theta = combos[ci].theta;
        }
        if (has_pw) row.p_w_mean_w = pw / n;
        if (has_leak) {
          row.leakage_mean_w = leak / n;
          row.deviation_mean_w = dev / n;
        }
        if (has_lambda) {
          diag.lambda_min = lmin;
          diag.lambda_max = lmax;
        }
        result.rows.push_back(std::move(row));
        result.diags.push_back(std::move(diag));
      }
    }
  }
  return result;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "sweep_axis,value,scheme,theta,p_w_mean,r_bar,r_min_bar,leakage_mean,deviation_mean,"
        "num_drops,seed\n";
  for (const ResultRow& r : rows) {
    os << r.sweep_axis << "," << fmt(r.value) << "," << r.scheme << "," << opt_fmt(r.theta) << ","
       << opt_fmt(r.p_w_mean_w) << "," << fmt(r.r_bar) << "," << fmt(r.r_min_bar) << ","
       << opt_fmt(r.leakage_mean_w) << "," << opt_fmt(r.deviation_mean_w) << "," << r.num_drops
       << "," << r.seed << "\n";
  }
  return os.str();
}

std::string to_jsonl(const std::vector<DiagRecord>& diags) {
  std::ostringstream os;
  for (const DiagRecord& d : diags) {
    os << "{\"sweep_axis\":\"" << d.sweep_axis << "\",\"value\":" << fmt(d.value)
       << ",\"scheme\":\"" << d.scheme << "\"";
    if (d.theta) os << ",\"theta\":" << fmt(*d.theta);
    os << ",\"closed_form_count\":" << d.closed_form_count << ",\"ridge_count\":" << d.ridge_count;
    if (d.lambda_min) {
      os << ",\"lambda_min\":" << fmt(*d.lambda_min) << ",\"lambda_max\":" << fmt(*d.lambda_max);
    }
    os << "}\n";
  }
  return os.str();
}

std::string solve_instance_dump(const ExperimentConfig& cfg, int drop) {
  validate_config(cfg);
  const std::uint64_t master = cfg.monte_carlo.master_seed;
  const NetworkTopology topo =
      build_topology(cfg.topology, derive_seed(master, drop, "topology"));
  const ChannelSet true_ch = sample_channels(topo, derive_seed(master, drop, "channels"),
                                             cfg.physics.shadowing_sigma_db);
  const ChannelSet design_ch = cfg.csi_error > 0.0
                                   ? corrupt_csi(true_ch, cfg.csi_error,
                                                 derive_seed(master, drop, "csi"))
                                   : true_ch;
  const std::vector<double> alphas(cfg.topology.num_sps, 1.0 / cfg.topology.num_sps);
  const DemandSet demand = build_demand(design_ch, alphas, cfg.sp_precoders);

  SolverParams params;
  params.theta = {cfg.solver.theta.front()};
  params.p_max_w = {cfg.p_max_w()};
  if (!cfg.solver.p_w_auto) params.p_w_w = {dbm_to_watt(cfg.solver.p_w_dbm.front())};
  params.bisection_rel_tol = cfg.solver.bisection_rel_tol;
  params.max_bisection_iters = cfg.solver.max_bisection_iters;

  const std::vector<PrecodingSolution> sols = solve_network(design_ch, demand, params);
  std::vector<ComplexMatrix> v;
  v.reserve(sols.size());
  for (const PrecodingSolution& sol : sols) v.push_back(sol.precoder);
  const EvalReport rep = rates(sinr_all(true_ch, v, cfg.noise_w()), cfg.noise_w());

  std::ostringstream os;
  os << "{\"drop\":" << drop << ",\"theta\":" << fmt(params.theta.front())
     << ",\"r_bar\":" << fmt(rep.r_bar) << ",\"r_min_bar\":" << fmt(rep.r_min_bar)
     << ",\"cells\":[";
  for (std::size_t c = 0; c < sols.size(); ++c) {
    const PrecodingSolution& s = sols[c];
    os << (c ? "," : "") << "{\"cell\":" << c << ",\"branch\":\""
       << (s.branch == SolveBranch::kClosedForm ? "CLOSED_FORM" : "RIDGE_BISECTION")
       << "\",\"lambda\":" << fmt(s.lambda) << ",\"p_w\":" << fmt(s.p_w_used_w)
       << ",\"power\":" << fmt(s.achieved_power_w) << ",\"leakage\":" << fmt(s.leakage_w)
       << ",\"deviation\":" << fmt(s.deviation_w) << "}";
  }
  os << "]}\n";
  return os.str();
}

}  // namespace wnv
