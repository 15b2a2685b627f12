#include "wnv/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wnv/rng.hpp"

namespace wnv {

namespace {

struct Axial {
  int q = 0;
  int r = 0;
};

int hex_distance(Axial a) { return (std::abs(a.q) + std::abs(a.r) + std::abs(a.q + a.r)) / 2; }

// Flat-top hexagon grid: adjacent centers sit at distance sqrt(3)*R.
Point axial_to_point(Axial a, double radius) {
  return {1.5 * radius * a.q, std::numbers::sqrt3 * radius * (a.r + 0.5 * a.q)};
}

// 1 = single cell, 7/19 = center plus complete rings, 3 = center plus the
// first two ring-1 neighbors (a mutually adjacent triangle) for small runs.
std::vector<Point> hex_centers(int cells, double radius) {
  int rings;
  switch (cells) {
    case 1: rings = 0; break;
    case 3:
    case 7: rings = 1; break;
    case 19: rings = 2; break;
    default:
      throw std::invalid_argument("build_topology: " + std::to_string(cells) +
                                  " cells not supported by the hex layout; "
                                  "supported values are 1, 3, 7, 19");
  }
  std::vector<Axial> coords;
  for (int q = -rings; q <= rings; ++q)
    for (int r = -rings; r <= rings; ++r)
      if (hex_distance({q, r}) <= rings) coords.push_back({q, r});
  std::sort(coords.begin(), coords.end(), [radius](Axial a, Axial b) {
    const int da = hex_distance(a), db = hex_distance(b);
    if (da != db) return da < db;
    const Point pa = axial_to_point(a, radius), pb = axial_to_point(b, radius);
    return std::atan2(pa.y, pa.x) < std::atan2(pb.y, pb.x);
  });
  std::vector<Point> centers;
  centers.reserve(cells);
  for (int i = 0; i < cells; ++i) centers.push_back(axial_to_point(coords[i], radius));
  return centers;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

bool point_in_hexagon(Point p, Point center, double radius) {
  const double dx = std::abs(p.x - center.x);
  const double dy = std::abs(p.y - center.y);
  const double s3 = std::numbers::sqrt3;
  return dx <= radius && dy <= 0.5 * s3 * radius && s3 * dx + dy <= s3 * radius;
}

double pathloss_db(double distance_km) { return -31.54 - 33.0 * std::log10(distance_km); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

int ChannelSet::cell_users(int c) const {
  int k = 0;
  for (int km : users[c]) k += km;
  return k;
}

int ChannelSet::total_users() const {
  int k = 0;
  for (int c = 0; c < num_cells(); ++c) k += cell_users(c);
  return k;
}

int ChannelSet::total_antennas() const {
  int n = 0;
  for (int nc : antennas) n += nc;
  return n;
}

int ChannelSet::user_offset(int cell) const {
  int off = 0;
  for (int c = 0; c < cell; ++c) off += cell_users(c);
  return off;
}

int ChannelSet::sp_offset(int cell, int sp) const {
  int off = 0;
  for (int m = 0; m < sp; ++m) off += users[cell][m];
  return off;
}

ComplexMatrix ChannelSet::sp_view(int c, int l, int m) const {
  return blocks[c][l].block(sp_offset(c, m), 0, users[c][m], antennas[l]);
}

ChannelSet ChannelSet::from_blocks(std::vector<int> antennas, std::vector<std::vector<int>> users,
                                   std::vector<std::vector<ComplexMatrix>> blocks) {
  ChannelSet set;
  set.antennas = std::move(antennas);
  set.users = std::move(users);
  set.blocks = std::move(blocks);
  const int c_count = set.num_cells();
  if (static_cast<int>(set.users.size()) != c_count ||
      static_cast<int>(set.blocks.size()) != c_count) {
    throw std::invalid_argument("ChannelSet: per-cell list lengths disagree");
  }
  for (int l = 0; l < c_count; ++l) {
    if (static_cast<int>(set.blocks[l].size()) != c_count) {
      throw std::invalid_argument("ChannelSet: block grid is not cells x cells");
    }
    for (int c = 0; c < c_count; ++c) {
      const ComplexMatrix& b = set.blocks[l][c];
      if (static_cast<int>(b.rows()) != set.cell_users(l) ||
          static_cast<int>(b.cols()) != set.antennas[c]) {
        throw std::invalid_argument("ChannelSet: block (" + std::to_string(l) + "," +
                                    std::to_string(c) + ") has shape " + std::to_string(b.rows()) +
                                    "x" + std::to_string(b.cols()) + ", expected " +
                                    std::to_string(set.cell_users(l)) + "x" +
                                    std::to_string(set.antennas[c]));
      }
    }
  }
  return set;
}

NetworkTopology build_topology(const TopologyConfig& config, std::uint64_t seed) {
  if (config.cells < 1 || config.num_sps < 1 || config.users_per_sp < 1 ||
      config.antennas_per_cell < 1 || config.cell_radius_m <= 0.0 ||
      config.exclusion_radius_m < 0.0) {
    throw std::invalid_argument("build_topology: all config fields must be positive");
  }
  if (config.exclusion_radius_m >= 0.5 * std::numbers::sqrt3 * config.cell_radius_m) {
    throw std::invalid_argument("build_topology: exclusion radius leaves no placement area");
  }
  NetworkTopology topo;
  topo.config = config;
  topo.bs_positions = hex_centers(config.cells, config.cell_radius_m);

  RandomStream positions(derive_seed(seed, 0, "positions"));
  const double r = config.cell_radius_m;
  const double half_height = 0.5 * std::numbers::sqrt3 * r;
  topo.user_positions.reserve(topo.total_users());
  for (int c = 0; c < config.cells; ++c) {
    const Point bs = topo.bs_positions[c];
    for (int m = 0; m < config.num_sps; ++m) {
      for (int k = 0; k < config.users_per_sp; ++k) {
        Point p;
        do {
          p = {bs.x + positions.uniform(-r, r), bs.y + positions.uniform(-half_height, half_height)};
        } while (!point_in_hexagon(p, bs, r) || distance(p, bs) < config.exclusion_radius_m);
        topo.user_positions.push_back(p);
      }
    }
  }
  return topo;
}

ChannelSet sample_channels(const NetworkTopology& topo, std::uint64_t seed,
                           double shadowing_sigma_db) {
  const int cells = topo.num_cells();
  ChannelSet set;
  set.antennas.assign(cells, topo.config.antennas_per_cell);
  set.users.assign(cells, std::vector<int>(topo.num_sps(), topo.config.users_per_sp));

  // Large-scale gains first: one shadowing draw per user-BS link.
  RandomStream shadowing(derive_seed(seed, 0, "shadowing"));
  const int k_total = topo.total_users();
  set.link_gain.assign(k_total, std::vector<double>(cells, 0.0));
  for (int u = 0; u < k_total; ++u) {
    for (int c = 0; c < cells; ++c) {
      const double d_km = distance(topo.user_positions[u], topo.bs_positions[c]) / 1000.0;
      const double psi = shadowing.normal() * shadowing_sigma_db;
      set.link_gain[u][c] = db_to_linear(pathloss_db(d_km) - psi);
    }
  }

  RandomStream fading(derive_seed(seed, 0, "fading"));
  set.blocks.assign(cells, std::vector<ComplexMatrix>(cells));
  for (int l = 0; l < cells; ++l) {
    const int k_l = set.cell_users(l);
    const int row0 = topo.user_offset(l);
    for (int c = 0; c < cells; ++c) {
      ComplexMatrix block(k_l, set.antennas[c]);
      for (int i = 0; i < k_l; ++i) {
        const double amp = std::sqrt(set.link_gain[row0 + i][c]);
        for (int j = 0; j < set.antennas[c]; ++j) block(i, j) = amp * fading.cnormal();
      }
      set.blocks[l][c] = std::move(block);
    }
  }
  return set;
}

ChannelSet corrupt_csi(const ChannelSet& true_channels, double e_h, std::uint64_t seed) {
  if (e_h < 0.0) throw std::invalid_argument("corrupt_csi: e_h must be nonnegative");
  ChannelSet out = true_channels;
  if (e_h == 0.0) return out;
  if (out.link_gain.empty()) {
    throw std::invalid_argument("corrupt_csi: channel set carries no per-link gains");
  }
  RandomStream err(derive_seed(seed, 0, "csi_error"));
  for (int l = 0; l < out.num_cells(); ++l) {
    const int row0 = out.user_offset(l);
    for (int c = 0; c < out.num_cells(); ++c) {
      ComplexMatrix& block = out.blocks[l][c];
      for (std::size_t i = 0; i < block.rows(); ++i) {
        const double amp = e_h * std::sqrt(out.link_gain[row0 + i][c]);
        for (std::size_t j = 0; j < block.cols(); ++j) block(i, j) += amp * err.cnormal();
      }
    }
  }
  return out;
}

ChannelSet restrict_to_sp(const ChannelSet& channels, int sp) {
  const int cells = channels.num_cells();
  ChannelSet out;
  out.antennas = channels.antennas;
  out.users.assign(cells, std::vector<int>(1, 0));
  for (int c = 0; c < cells; ++c) out.users[c][0] = channels.users[c][sp];
  out.blocks.assign(cells, std::vector<ComplexMatrix>(cells));
  for (int l = 0; l < cells; ++l)
    for (int c = 0; c < cells; ++c) out.blocks[l][c] = channels.sp_view(l, c, sp);
  return out;
}

}  // namespace wnv
