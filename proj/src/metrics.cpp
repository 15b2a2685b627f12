#include "wnv/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wnv {

SinrTensor sinr_all(const ChannelSet& true_channels, const std::vector<ComplexMatrix>& v,
                    double noise_power_w) {
  const int cells = true_channels.num_cells();
  const int sps = true_channels.num_sps();
  if (static_cast<int>(v.size()) != cells) {
    throw std::invalid_argument("sinr_all: got " + std::to_string(v.size()) +
                                " precoders for " + std::to_string(cells) + " cells");
  }
  if (!(noise_power_w > 0.0)) throw std::invalid_argument("sinr_all: noise power must be > 0");
  for (int c = 0; c < cells; ++c) {
    if (static_cast<int>(v[c].rows()) != true_channels.antennas[c] ||
        static_cast<int>(v[c].cols()) != true_channels.cell_users(c)) {
      throw std::invalid_argument(
          "sinr_all: precoder block for cell " + std::to_string(c) + " is " +
          std::to_string(v[c].rows()) + "x" + std::to_string(v[c].cols()) + ", expected " +
          std::to_string(true_channels.antennas[c]) + "x" +
          std::to_string(true_channels.cell_users(c)) + " (SP column blocks per users[c][m])");
    }
  }

  // Received coefficients per cell pair; the own-cell diagonal is the desired
  // entry, everything else in the row is interference.
  std::vector<std::vector<ComplexMatrix>> recv(cells, std::vector<ComplexMatrix>(cells));
  for (int c = 0; c < cells; ++c)
    for (int l = 0; l < cells; ++l) recv[c][l] = matmul(true_channels.bar_block(c, l), v[l]);

  SinrTensor sinr(cells);
  for (int c = 0; c < cells; ++c) {
    sinr[c].resize(sps);
    for (int m = 0; m < sps; ++m) {
      const int off = true_channels.sp_offset(c, m);
      sinr[c][m].resize(true_channels.users[c][m]);
      for (int k = 0; k < true_channels.users[c][m]; ++k) {
        const int row = off + k;
        const double desired = std::norm(recv[c][c](row, row));
        double interference = -desired;
        for (int l = 0; l < cells; ++l) {
          const ComplexMatrix& g = recv[c][l];
          for (std::size_t j = 0; j < g.cols(); ++j) interference += std::norm(g(row, j));
        }
        sinr[c][m][k] = desired / (interference + noise_power_w);
      }
    }
  }
  return sinr;
}

SinrTensor sinr_virtual_only(const DemandSet& demand, const std::vector<double>& p_w_w,
                             double noise_power_w) {
  const int cells = static_cast<int>(demand.d.size());
  if (static_cast<int>(p_w_w.size()) != cells) {
    throw std::invalid_argument("sinr_virtual_only: need one virtual power per cell");
  }
  SinrTensor sinr(cells);
  for (int c = 0; c < cells; ++c) {
    const int sps = static_cast<int>(demand.w[c].size());
    sinr[c].resize(sps);
    int row = 0;
    for (int m = 0; m < sps; ++m) {
      const int k_cm = static_cast<int>(demand.w[c][m].cols());
      sinr[c][m].resize(k_cm);
      for (int k = 0; k < k_cm; ++k, ++row) {
        sinr[c][m][k] = p_w_w[c] * std::norm(demand.d[c](row, row)) / noise_power_w;
      }
    }
  }
  return sinr;
}

EvalReport rates(const SinrTensor& sinr, double noise_power_w) {
  EvalReport report;
  report.sinr = sinr;
  report.noise_power_w = noise_power_w;
  report.rate.resize(sinr.size());
  double rate_sum = 0.0;
  double min_sum = 0.0;
  int user_count = 0;
  int sp_count = 0;
  for (std::size_t c = 0; c < sinr.size(); ++c) {
    report.rate[c].resize(sinr[c].size());
    for (std::size_t m = 0; m < sinr[c].size(); ++m) {
      double sp_min = 0.0;
      for (std::size_t k = 0; k < sinr[c][m].size(); ++k) {
        const double s = sinr[c][m][k];
        if (!(s >= 0.0) || !std::isfinite(s)) {
          throw std::invalid_argument("rates: SINR entries must be finite and nonnegative");
        }
        const double r = std::log2(1.0 + s);
        report.rate[c][m].push_back(r);
        rate_sum += r;
        ++user_count;
        sp_min = (k == 0) ? r : std::min(sp_min, r);
      }
      min_sum += sp_min;
      ++sp_count;
    }
  }
  report.r_bar = user_count > 0 ? rate_sum / user_count : 0.0;
  report.r_min_bar = sp_count > 0 ? min_sum / sp_count : 0.0;
  return report;
}

std::pair<double, double> cell_leakage_deviation(const ChannelSet& channels, int cell,
                                                 const ComplexMatrix& v_c,
                                                 const ComplexMatrix& d_c, double p_w_w) {
  double leak = 0.0;
  for (int l = 0; l < channels.num_cells(); ++l) {
    if (l == cell) continue;
    leak += fro_norm_sq(matmul(channels.bar_block(l, cell), v_c));
  }
  const ComplexMatrix own = matmul(channels.bar_block(cell, cell), v_c);
  const double dev = fro_norm_sq(sub(own, scale(d_c, std::sqrt(p_w_w))));
  return {leak, dev};
}

std::vector<std::pair<double, double>> leakage_deviation(const ChannelSet& channels,
                                                         const std::vector<ComplexMatrix>& v,
                                                         const DemandSet& demand,
                                                         const std::vector<double>& p_w_w) {
  const int cells = channels.num_cells();
  if (static_cast<int>(v.size()) != cells || static_cast<int>(p_w_w.size()) != cells) {
    throw std::invalid_argument("leakage_deviation: per-cell list lengths disagree");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(cells);
  for (int c = 0; c < cells; ++c) {
    out.push_back(cell_leakage_deviation(channels, c, v[c], demand.d[c], p_w_w[c]));
  }
  return out;
}

double noise_power_watt(double n0_dbm_hz, double bandwidth_hz, double noise_figure_db) {
  return dbm_to_watt(n0_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

}  // namespace wnv
