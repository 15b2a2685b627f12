#pragma once

#include <utility>
#include <vector>

#include "wnv/channel.hpp"
#include "wnv/demand.hpp"
#include "wnv/linalg.hpp"

namespace wnv {

using SinrTensor = std::vector<std::vector<std::vector<double>>>;  // [cell][sp][user]

struct EvalReport {
  SinrTensor sinr;          // linear
  SinrTensor rate;          // bits/s/Hz
  double r_bar = 0.0;       // mean rate over all users
  double r_min_bar = 0.0;   // mean over (cell, SP) of the per-SP minimum rate
  std::vector<double> leakage;    // f_c per cell, watts (may be empty)
  std::vector<double> deviation;  // rho_c per cell, watts (may be empty)
  double noise_power_w = 0.0;
};

/// Per-user SINR of block-diagonal per-cell precoding, always on the given
/// (true) channels. v[c] is the N_c x K_c precoder of cell c.
SinrTensor sinr_all(const ChannelSet& true_channels, const std::vector<ComplexMatrix>& v,
                    double noise_power_w);

/// SINR of the demand-side virtual signal: own diagonal entry only, no
/// interference terms.
SinrTensor sinr_virtual_only(const DemandSet& demand, const std::vector<double>& p_w_w,
                             double noise_power_w);

EvalReport rates(const SinrTensor& sinr, double noise_power_w);

/// Signal leakage f_c and precoding deviation rho_c of one cell's precoder.
std::pair<double, double> cell_leakage_deviation(const ChannelSet& channels, int cell,
                                                 const ComplexMatrix& v_c,
                                                 const ComplexMatrix& d_c, double p_w_w);

std::vector<std::pair<double, double>> leakage_deviation(const ChannelSet& channels,
                                                         const std::vector<ComplexMatrix>& v,
                                                         const DemandSet& demand,
                                                         const std::vector<double>& p_w_w);

/// Thermal noise power over a bandwidth: N0 + 10 log10(B) + NF, in watts.
double noise_power_watt(double n0_dbm_hz, double bandwidth_hz, double noise_figure_db);

}  // namespace wnv
