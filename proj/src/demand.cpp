#include "wnv/demand.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wnv {

ComplexMatrix sp_precoder(const ComplexMatrix& h_local, PrecoderKind kind) {
  const std::size_t k = h_local.rows();
  const std::size_t n = h_local.cols();
  ComplexMatrix w;
  switch (kind) {
    case PrecoderKind::kMrt:
      w = hermitian(h_local);
      break;
    case PrecoderKind::kZf:
      if (k > n) {
        throw std::invalid_argument("sp_precoder: ZF needs users <= antennas, got " +
                                    std::to_string(k) + " users and " + std::to_string(n) +
                                    " antennas");
      }
      // H^H (H H^H)^{-1}; pinv_apply takes the wide branch here.
      w = pinv_apply(h_local, ComplexMatrix::identity(k));
      break;
  }
  const double nrm = fro_norm(w);
  if (!(nrm > 0.0)) throw std::runtime_error("sp_precoder: zero channel, cannot normalize");
  return scale(w, 1.0 / nrm);
}

DemandSet build_demand(const ChannelSet& channels, const std::vector<double>& alphas,
                       const std::vector<PrecoderKind>& kinds) {
  const int cells = channels.num_cells();
  const int sps = channels.num_sps();
  if (static_cast<int>(alphas.size()) != sps || static_cast<int>(kinds.size()) != sps) {
    throw std::invalid_argument("build_demand: need one alpha and one precoder kind per SP");
  }
  double alpha_sum = 0.0;
  for (double a : alphas) {
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("build_demand: alpha outside [0,1]");
    alpha_sum += a;
  }
  if (std::abs(alpha_sum - 1.0) > 1e-12) {
    throw std::invalid_argument("build_demand: alphas sum to " + std::to_string(alpha_sum) +
                                ", expected 1");
  }

  const int k_total = channels.total_users();
  DemandSet demand;
  demand.w.resize(cells);
  demand.alpha.resize(cells);
  demand.d.reserve(cells);
  demand.d_tilde.reserve(cells);
  for (int c = 0; c < cells; ++c) {
    std::vector<ComplexMatrix> diag_blocks;
    diag_blocks.reserve(sps);
    for (int m = 0; m < sps; ++m) {
      // Service isolation: only the SP's own local block enters the demand.
      const ComplexMatrix h_local = channels.sp_view(c, c, m);
      ComplexMatrix w = sp_precoder(h_local, kinds[m]);
      diag_blocks.push_back(scale(matmul(h_local, w), std::sqrt(alphas[m])));
      demand.w[c].push_back(std::move(w));
      demand.alpha[c].push_back(alphas[m]);
    }
    ComplexMatrix d_c = block_diag(diag_blocks);
    ComplexMatrix padded(k_total, d_c.cols());
    padded.set_block(channels.user_offset(c), 0, d_c);
    demand.d.push_back(std::move(d_c));
    demand.d_tilde.push_back(std::move(padded));
  }
  return demand;
}

}  // namespace wnv
