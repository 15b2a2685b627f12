#include "wnv/solver.hpp"

#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

#include "wnv/metrics.hpp"

namespace wnv {

namespace {

std::string num_str(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific << v;
  return os.str();
}

void validate_params(const SolverParams& params, int cells) {
  auto check_len = [cells](std::size_t n, const char* what) {
    if (n != 1 && static_cast<int>(n) != cells) {
      throw std::invalid_argument(std::string("solve_network: ") + what +
                                  " must have 1 or num_cells entries");
    }
  };
  if (params.theta.empty() || params.p_max_w.empty()) {
    throw std::invalid_argument("solve_network: theta and p_max are required");
  }
  check_len(params.theta.size(), "theta");
  check_len(params.p_max_w.size(), "p_max");
  if (!params.p_w_w.empty()) check_len(params.p_w_w.size(), "p_w");
  for (int c = 0; c < cells; ++c) {
    const double th = params.theta_for(c);
    if (!(th > 0.0 && th < 1.0)) {
      throw std::invalid_argument("solve_network: theta must lie in the open interval (0,1), got " +
                                  num_str(th));
    }
    if (!(params.p_max_for(c) > 0.0)) {
      throw std::invalid_argument("solve_network: p_max must be positive");
    }
    if (!params.p_w_auto() && params.p_w_for(c) > params.p_max_for(c) * (1.0 + 1e-12)) {
      throw std::invalid_argument("solve_network: explicit p_w exceeds p_max in cell " +
                                  std::to_string(c));
    }
  }
  if (!(params.bisection_rel_tol > 0.0) || params.max_bisection_iters < 1) {
    throw std::invalid_argument("solve_network: bad bisection settings");
  }
}

PrecodingSolution solve_one_cell(const ChannelSet& channels, const DemandSet& demand,
                                 const SolverParams& params, int cell) {
  const ComplexMatrix h_eff = effective_channel(channels, cell, params.theta_for(cell));
  const ComplexMatrix& d_tilde = demand.d_tilde[cell];
  const double p_max = params.p_max_for(cell);
  const double p_w =
      params.p_w_auto() ? virtual_power_cell(h_eff, d_tilde, p_max) : params.p_w_for(cell);
  PrecodingSolution sol = solve_weighted_cell(h_eff, d_tilde, p_w, p_max,
                                              params.bisection_rel_tol,
                                              params.max_bisection_iters);
  const auto [leak, dev] =
      cell_leakage_deviation(channels, cell, sol.precoder, demand.d[cell], p_w);
  sol.leakage_w = leak;
  sol.deviation_w = dev;
  return sol;
}

}  // namespace

ComplexMatrix effective_channel(const ChannelSet& channels, int cell, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("effective_channel: theta must lie in (0,1), got " +
                                num_str(theta));
  }
  const int cells = channels.num_cells();
  const double foreign_scale = std::sqrt((1.0 - theta) / theta);
  ComplexMatrix h_eff(channels.total_users(), channels.antennas[cell]);
  int row = 0;
  for (int l = 0; l < cells; ++l) {
    const ComplexMatrix& block = channels.bar_block(l, cell);
    h_eff.set_block(row, 0, l == cell ? block : scale(block, foreign_scale));
    row += static_cast<int>(block.rows());
  }
  return h_eff;
}

double virtual_power_cell(const ComplexMatrix& h_eff, const ComplexMatrix& d_tilde,
                          double p_max) {
  const double demand_power = fro_norm_sq(pinv_apply(h_eff, d_tilde));
  if (!(demand_power > 0.0)) return p_max;  // zero demand: any power is feasible
  return std::min(p_max / demand_power, p_max);
}

PrecodingSolution solve_weighted_cell(const ComplexMatrix& h_eff, const ComplexMatrix& d_tilde,
                                      double p_w, double p_max, double rel_tol, int max_iters) {
  if (h_eff.rows() != d_tilde.rows()) {
    throw std::invalid_argument("solve_weighted_cell: H_eff has " + std::to_string(h_eff.rows()) +
                                " rows but D_tilde has " + std::to_string(d_tilde.rows()));
  }
  if (!(p_w > 0.0) || !(p_max > 0.0)) {
    throw std::invalid_argument("solve_weighted_cell: powers must be positive");
  }

  PrecodingSolution sol;
  sol.p_w_used_w = p_w;
  const double sqrt_pw = std::sqrt(p_w);

  bool closed_ok = false;
  try {
    ComplexMatrix v0 = pinv_apply(h_eff, d_tilde);
    if (p_w * fro_norm_sq(v0) <= p_max * (1.0 + 1e-12)) {
      sol.precoder = scale(v0, sqrt_pw);
      sol.branch = SolveBranch::kClosedForm;
      sol.lambda = 0.0;
      closed_ok = true;
    }
  } catch (const std::runtime_error&) {
    // Gram matrix too ill-conditioned for the pseudo-inverse: the power-limited
    // ridge path below handles it.
  }

  if (!closed_ok) {
    const ComplexMatrix hh = hermitian(h_eff);
    const ComplexMatrix gram = matmul(hh, h_eff);
    const ComplexMatrix rhs = matmul(hh, d_tilde);
    const std::size_t n_c = h_eff.cols();
    const double upper =
        fro_norm_sq(h_eff) * std::sqrt(static_cast<double>(n_c) * p_w / p_max);

    auto power_at = [&](double lambda, ComplexMatrix* v_out) {
      ComplexMatrix x = solve_hpd(gram, rhs, lambda);
      const double power = p_w * fro_norm_sq(x);
      if (v_out) *v_out = scale(x, sqrt_pw);
      return power;
    };

    const double power_upper = power_at(upper, nullptr);
    if (power_upper > p_max * (1.0 + rel_tol)) {
      throw std::runtime_error(
          "solve_weighted_cell: bisection bracket failed; power at multiplier upper bound " +
          num_str(upper) + " is " + num_str(power_upper) + " > p_max " + num_str(p_max));
    }

    double lo = 0.0, hi = upper;
    bool done = false;
    for (int it = 0; it < max_iters && !done; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double power = power_at(mid, nullptr);
      sol.bisection_iters = it + 1;
      if (std::abs(power - p_max) <= rel_tol * p_max) {
        sol.lambda = mid;
        done = true;
      } else if (power > p_max) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (!done) {
      throw std::runtime_error("solve_weighted_cell: bisection did not converge in " +
                               std::to_string(max_iters) + " iterations; last bracket [" +
                               num_str(lo) + ", " + num_str(hi) + "]");
    }
    power_at(sol.lambda, &sol.precoder);
    sol.branch = SolveBranch::kRidgeBisection;
  }

  sol.achieved_power_w = fro_norm_sq(sol.precoder);
  sol.effective_objective =
      fro_norm_sq(sub(matmul(h_eff, sol.precoder), scale(d_tilde, sqrt_pw)));
  return sol;
}

double kkt_stationarity_residual(const ComplexMatrix& h_eff, const ComplexMatrix& d_tilde,
                                 double p_w, const PrecodingSolution& sol) {
  const ComplexMatrix residual =
      sub(matmul(h_eff, sol.precoder), scale(d_tilde, std::sqrt(p_w)));
  ComplexMatrix grad = matmul(hermitian(h_eff), residual);
  if (sol.lambda != 0.0) grad = add(grad, scale(sol.precoder, sol.lambda));
  return fro_norm(grad);
}

std::vector<PrecodingSolution> solve_network(const ChannelSet& channels, const DemandSet& demand,
                                             const SolverParams& params) {
  const int cells = channels.num_cells();
  validate_params(params, cells);
  if (static_cast<int>(demand.d_tilde.size()) != cells) {
    throw std::invalid_argument("solve_network: demand set does not match channel set");
  }

  std::vector<PrecodingSolution> sols(cells);
  auto run_cell = [&](int c) {
    try {
      sols[c] = solve_one_cell(channels, demand, params, c);
    } catch (const std::exception& e) {
      throw std::runtime_error("cell " + std::to_string(c) + ": " + e.what());
    }
  };

  if (params.parallel && cells > 1) {
    std::vector<std::future<void>> futures;
    futures.reserve(cells);
    for (int c = 0; c < cells; ++c) {
      futures.push_back(std::async(std::launch::async, run_cell, c));
    }
    std::exception_ptr first_error;
    for (int c = 0; c < cells; ++c) {
      try {
        futures[c].get();
      } catch (...) {
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
  } else {
    for (int c = 0; c < cells; ++c) run_cell(c);
  }
  return sols;
}

std::vector<ParetoPoint> pareto_sweep(const ChannelSet& channels, const DemandSet& demand,
                                      const SolverParams& params,
                                      const std::vector<double>& theta_grid) {
  if (theta_grid.empty()) throw std::invalid_argument("pareto_sweep: empty theta grid");
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (!(theta_grid[i] > 0.0 && theta_grid[i] < 1.0)) {
      throw std::invalid_argument("pareto_sweep: theta grid values must lie in (0,1)");
    }
    if (i > 0 && theta_grid[i] <= theta_grid[i - 1]) {
      throw std::invalid_argument("pareto_sweep: theta grid must be sorted ascending");
    }
  }
  const int cells = channels.num_cells();

  // A frontier needs a fixed objective: resolve AUTO power once, at theta=1/2.
  SolverParams fixed = params;
  if (fixed.p_w_auto()) {
    fixed.p_w_w.resize(cells);
    for (int c = 0; c < cells; ++c) {
      fixed.p_w_w[c] = virtual_power_cell(effective_channel(channels, c, 0.5),
                                          demand.d_tilde[c], fixed.p_max_for(c));
    }
  }

  std::vector<ParetoPoint> points;
  points.reserve(theta_grid.size());
  for (double theta : theta_grid) {
    fixed.theta.assign(1, theta);
    const std::vector<PrecodingSolution> sols = solve_network(channels, demand, fixed);
    ParetoPoint p;
    p.theta = theta;
    for (int c = 0; c < cells; ++c) {
      p.leakage.push_back(sols[c].leakage_w);
      p.deviation.push_back(sols[c].deviation_w);
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace wnv
