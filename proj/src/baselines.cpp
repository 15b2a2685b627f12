#include "wnv/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wnv {

ComplexMatrix global_channel(const ChannelSet& channels) {
  const int cells = channels.num_cells();
  ComplexMatrix h(channels.total_users(), channels.total_antennas());
  int col = 0;
  for (int c = 0; c < cells; ++c) {
    int row = 0;
    for (int l = 0; l < cells; ++l) {
      h.set_block(row, col, channels.bar_block(l, c));
      row += channels.cell_users(l);
    }
    col += channels.antennas[c];
  }
  return h;
}

BaselineResult cooperative_zf(const ChannelSet& design, const ChannelSet& eval_channels,
                              const std::vector<double>& p_max_w, double noise_power_w) {
  const int k = design.total_users();
  const int n = design.total_antennas();
  if (k > n) {
    throw std::invalid_argument("cooperative_zf: undefined for " + std::to_string(k) +
                                " users > " + std::to_string(n) + " antennas");
  }
  if (static_cast<int>(p_max_w.size()) != design.num_cells()) {
    throw std::invalid_argument("cooperative_zf: need one p_max per cell");
  }
  double sum_power = 0.0;
  for (double p : p_max_w) sum_power += p;

  const ComplexMatrix h_design = global_channel(design);
  ComplexMatrix v = pinv_apply(h_design, ComplexMatrix::identity(k));
  v = scale(v, std::sqrt(sum_power / fro_norm_sq(v)));

  // Evaluation on the true network channel; the row is the user's received
  // coefficient vector over all transmitted streams.
  const ComplexMatrix coeff = matmul(global_channel(eval_channels), v);
  SinrTensor sinr(eval_channels.num_cells());
  int row = 0;
  for (int c = 0; c < eval_channels.num_cells(); ++c) {
    sinr[c].resize(eval_channels.num_sps());
    for (int m = 0; m < eval_channels.num_sps(); ++m) {
      sinr[c][m].resize(eval_channels.users[c][m]);
      for (int u = 0; u < eval_channels.users[c][m]; ++u, ++row) {
        const double desired = std::norm(coeff(row, row));
        double interference = -desired;
        for (std::size_t j = 0; j < coeff.cols(); ++j) interference += std::norm(coeff(row, j));
        sinr[c][m][u] = desired / (interference + noise_power_w);
      }
    }
  }

  BaselineResult result;
  result.scheme = Scheme::kCoopZf;
  result.v_global = std::move(v);
  result.eval = rates(sinr, noise_power_w);
  result.bandwidth_share = 1.0;
  return result;
}

BaselineResult fd_leakage_min(const ChannelSet& design, const ChannelSet& eval_channels,
                              const DemandSet& demand, const SolverParams& params,
                              double noise_full_band_w) {
  const int cells = design.num_cells();
  const int sps = design.num_sps();
  const double share = 1.0 / sps;
  const double noise_sub_w = noise_full_band_w * share;  // thermal noise is per-Hz

  BaselineResult result;
  result.scheme = Scheme::kFd;
  result.bandwidth_share = share;
  result.per_sp.resize(sps);

  result.eval.noise_power_w = noise_sub_w;
  result.eval.sinr.assign(cells, {});
  result.eval.rate.assign(cells, {});
  for (int c = 0; c < cells; ++c) {
    result.eval.sinr[c].resize(sps);
    result.eval.rate[c].resize(sps);
  }
  result.eval.leakage.assign(cells, 0.0);
  result.eval.deviation.assign(cells, 0.0);

  double rate_sum = 0.0;
  double min_sum = 0.0;
  int user_count = 0;

  for (int m = 0; m < sps; ++m) {
    const ChannelSet sub_design = restrict_to_sp(design, m);

    // The SP's demand is unchanged; it just gets the whole sub-band (alpha=1).
    DemandSet sub_demand;
    sub_demand.w.resize(cells);
    sub_demand.alpha.resize(cells);
    for (int c = 0; c < cells; ++c) {
      sub_demand.w[c].push_back(demand.w[c][m]);
      sub_demand.alpha[c].push_back(1.0);
      ComplexMatrix d_c = matmul(sub_design.bar_block(c, c), demand.w[c][m]);
      ComplexMatrix padded(sub_design.total_users(), d_c.cols());
      padded.set_block(sub_design.user_offset(c), 0, d_c);
      sub_demand.d.push_back(std::move(d_c));
      sub_demand.d_tilde.push_back(std::move(padded));
    }

    result.per_sp[m] = solve_network(sub_design, sub_demand, params);
    std::vector<ComplexMatrix> v_sub;
    v_sub.reserve(cells);
    for (const PrecodingSolution& sol : result.per_sp[m]) v_sub.push_back(sol.precoder);

    const ChannelSet sub_true = restrict_to_sp(eval_channels, m);
    const SinrTensor sub_sinr = sinr_all(sub_true, v_sub, noise_sub_w);
    for (int c = 0; c < cells; ++c) {
      result.eval.sinr[c][m] = sub_sinr[c][0];
      double sp_min = 0.0;
      for (std::size_t u = 0; u < sub_sinr[c][0].size(); ++u) {
        const double r = share * std::log2(1.0 + sub_sinr[c][0][u]);
        result.eval.rate[c][m].push_back(r);
        rate_sum += r;
        ++user_count;
        sp_min = (u == 0) ? r : std::min(sp_min, r);
      }
      min_sum += sp_min;
      result.eval.leakage[c] += result.per_sp[m][c].leakage_w;
      result.eval.deviation[c] += result.per_sp[m][c].deviation_w;
    }
  }

  result.eval.r_bar = user_count > 0 ? rate_sum / user_count : 0.0;
  result.eval.r_min_bar = (cells * sps) > 0 ? min_sum / (cells * sps) : 0.0;
  return result;
}

}  // namespace wnv
