#pragma once

#include <cstdint>
#include <vector>

#include "wnv/linalg.hpp"

namespace wnv {

struct TopologyConfig {
  int cells = 1;
  double cell_radius_m = 500.0;  // center-to-vertex
  int antennas_per_cell = 8;
  int num_sps = 1;
  int users_per_sp = 1;  // per (cell, SP)
  double exclusion_radius_m = 35.0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Hexagonal-grid cell layout with uniformly dropped users. User ordering is
/// (cell, SP, user) lexicographic everywhere in this codebase.
struct NetworkTopology {
  TopologyConfig config;
  std::vector<Point> bs_positions;    // per cell
  std::vector<Point> user_positions;  // global user order

  int num_cells() const { return config.cells; }
  int num_sps() const { return config.num_sps; }
  int users_per_cell() const { return config.num_sps * config.users_per_sp; }
  int total_users() const { return num_cells() * users_per_cell(); }
  int user_offset(int cell) const { return cell * users_per_cell(); }
};

/// All aggregate channel blocks H(l,c): users of cell l from the BS of cell c.
struct ChannelSet {
  std::vector<int> antennas;                       // N_c per cell
  std::vector<std::vector<int>> users;             // users[c][m] = K_c^m
  std::vector<std::vector<ComplexMatrix>> blocks;  // blocks[l][c], K_l x N_c
  std::vector<std::vector<double>> link_gain;      // [global user][cell], linear; may be empty

  int num_cells() const { return static_cast<int>(antennas.size()); }
  int num_sps() const { return users.empty() ? 0 : static_cast<int>(users[0].size()); }
  int cell_users(int c) const;
  int total_users() const;
  int total_antennas() const;
  int user_offset(int cell) const;
  int sp_offset(int cell, int sp) const;  // row offset of SP's users within the cell

  const ComplexMatrix& bar_block(int l, int c) const { return blocks[l][c]; }
  /// The K_c^m-row slice of blocks[c][l] belonging to SP m's users in cell c.
  ComplexMatrix sp_view(int c, int l, int m) const;

  /// Builds a set from raw blocks, validating all shapes.
  static ChannelSet from_blocks(std::vector<int> antennas, std::vector<std::vector<int>> users,
                                std::vector<std::vector<ComplexMatrix>> blocks);
};

NetworkTopology build_topology(const TopologyConfig& config, std::uint64_t seed);

/// i.i.d. Rayleigh rows scaled by path loss and log-normal shadowing.
ChannelSet sample_channels(const NetworkTopology& topo, std::uint64_t seed,
                           double shadowing_sigma_db = 8.0);

/// Additive per-link error CN(0, e_h^2 * beta * I); e_h = 0 returns a copy.
ChannelSet corrupt_csi(const ChannelSet& true_channels, double e_h, std::uint64_t seed);

/// Keeps only SP `sp`'s users in every cell (for per-SP sub-networks).
ChannelSet restrict_to_sp(const ChannelSet& channels, int sp);

bool point_in_hexagon(Point p, Point center, double radius);

/// Large-scale gain in dB at distance d (km), before shadowing.
double pathloss_db(double distance_km);

double db_to_linear(double db);
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

}  // namespace wnv
