#pragma once

#include <vector>

#include "wnv/channel.hpp"
#include "wnv/linalg.hpp"

namespace wnv {

enum class PrecoderKind { kMrt, kZf };

/// Per-cell virtualization demand: normalized SP precoders, power shares and
/// the assembled demand matrices.
struct DemandSet {
  std::vector<std::vector<ComplexMatrix>> w;  // w[c][m]: N_c x K_c^m, unit Frobenius norm
  std::vector<std::vector<double>> alpha;     // alpha[c][m], sums to 1 per cell
  std::vector<ComplexMatrix> d;               // D_c: K_c x K_c block diagonal
  std::vector<ComplexMatrix> d_tilde;         // K x K_c, D_c at the cell's own rows
};

/// SP demand precoder from the SP's local channel only, unit Frobenius norm.
ComplexMatrix sp_precoder(const ComplexMatrix& h_local, PrecoderKind kind);

/// alphas and kinds are per SP and apply to every cell.
DemandSet build_demand(const ChannelSet& channels, const std::vector<double>& alphas,
                       const std::vector<PrecoderKind>& kinds);

}  // namespace wnv
