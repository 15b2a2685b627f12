#pragma once

#include <vector>

#include "wnv/channel.hpp"
#include "wnv/demand.hpp"
#include "wnv/linalg.hpp"

namespace wnv {

enum class SolveBranch { kClosedForm, kRidgeBisection };

struct SolverParams {
  std::vector<double> theta;    // per cell or size-1 broadcast, each in (0,1)
  std::vector<double> p_max_w;  // per cell or size-1 broadcast, watts
  std::vector<double> p_w_w;    // empty = AUTO; else per cell or size-1, watts
  double bisection_rel_tol = 1e-9;
  int max_bisection_iters = 200;
  bool parallel = false;

  double theta_for(int cell) const { return theta.size() == 1 ? theta[0] : theta.at(cell); }
  double p_max_for(int cell) const { return p_max_w.size() == 1 ? p_max_w[0] : p_max_w.at(cell); }
  bool p_w_auto() const { return p_w_w.empty(); }
  double p_w_for(int cell) const { return p_w_w.size() == 1 ? p_w_w[0] : p_w_w.at(cell); }
};

struct PrecodingSolution {
  ComplexMatrix precoder;  // N_c x K_c
  SolveBranch branch = SolveBranch::kClosedForm;
  double lambda = 0.0;
  double achieved_power_w = 0.0;
  double p_w_used_w = 0.0;
  double effective_objective = 0.0;  // ||H_eff V - sqrt(p_w) D_tilde||_F^2
  double leakage_w = 0.0;            // filled by solve_network
  double deviation_w = 0.0;          // filled by solve_network
  int bisection_iters = 0;
};

/// theta-weighted vertical stack of all channels out of `cell`: the own-cell
/// block unscaled, every foreign block scaled by sqrt((1-theta)/theta).
ComplexMatrix effective_channel(const ChannelSet& channels, int cell, double theta);

/// Largest virtual power for which the closed-form precoder meets the power
/// limit: min(p_max / ||pinv(H_eff) D_tilde||_F^2, p_max).
double virtual_power_cell(const ComplexMatrix& h_eff, const ComplexMatrix& d_tilde, double p_max);

/// Minimizes ||H_eff V - sqrt(p_w) D_tilde||_F^2 subject to ||V||_F^2 <= p_max.
/// Closed form when the pseudo-inverse solution fits the power budget,
/// otherwise ridge regularization with the multiplier found by bisection.
PrecodingSolution solve_weighted_cell(const ComplexMatrix& h_eff, const ComplexMatrix& d_tilde,
                                      double p_w, double p_max, double rel_tol = 1e-9,
                                      int max_iters = 200);

/// Stationarity residual ||H^H (H V - sqrt(p_w) D) + lambda V||_F.
double kkt_stationarity_residual(const ComplexMatrix& h_eff, const ComplexMatrix& d_tilde,
                                 double p_w, const PrecodingSolution& sol);

/// One independent solve per cell, from that cell's outgoing channels and its
/// own demand only.
std::vector<PrecodingSolution> solve_network(const ChannelSet& channels, const DemandSet& demand,
                                             const SolverParams& params);

struct ParetoPoint {
  double theta = 0.0;
  std::vector<double> leakage;    // per cell
  std::vector<double> deviation;  // per cell
};

/// Leakage/deviation frontier over a theta grid at fixed virtual power (AUTO
/// power is resolved once per cell at theta = 1/2 and then held fixed).
std::vector<ParetoPoint> pareto_sweep(const ChannelSet& channels, const DemandSet& demand,
                                      const SolverParams& params,
                                      const std::vector<double>& theta_grid);

}  // namespace wnv
