#pragma once

#include <vector>

#include "wnv/channel.hpp"
#include "wnv/demand.hpp"
#include "wnv/metrics.hpp"
#include "wnv/solver.hpp"

namespace wnv {

enum class Scheme { kProposed, kVirtualOnly, kCoopZf, kFd };

struct BaselineResult {
  Scheme scheme = Scheme::kCoopZf;
  ComplexMatrix v_global;                             // COOP_ZF: N x K network precoder
  std::vector<std::vector<PrecodingSolution>> per_sp;  // FD: [sp][cell]
  EvalReport eval;
  double bandwidth_share = 1.0;  // 1 for COOP_ZF, 1/M for FD
};

/// Idealized cooperative ZF across all cells under a network sum power
/// constraint. Designed on `design`, evaluated on `eval_channels`.
BaselineResult cooperative_zf(const ChannelSet& design, const ChannelSet& eval_channels,
                              const std::vector<double>& p_max_w, double noise_power_w);

/// Frequency-division service isolation: each SP runs the coordinated solve on
/// its own sub-network over bandwidth share 1/M; rates are normalized back to
/// the full system bandwidth.
BaselineResult fd_leakage_min(const ChannelSet& design, const ChannelSet& eval_channels,
                              const DemandSet& demand, const SolverParams& params,
                              double noise_full_band_w);

/// Stacks all per-cell channel blocks into the K x N network channel matrix.
ComplexMatrix global_channel(const ChannelSet& channels);

}  // namespace wnv
