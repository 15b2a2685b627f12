#pragma once

#include <vector>

#include "wnv/channel.hpp"
#include "wnv/demand.hpp"
#include "wnv/linalg.hpp"

namespace wnv {

/// Test-support solvers, deliberately independent of the semi-closed-form
/// path: plain projected gradient descent on small instances.
struct OracleConfig {
  double step_scale = 0.9;   // fraction of the 1/L safe step
  long max_iters = 400000;   // per minimization
  double obj_rel_tol = 1e-13;
};

struct OracleResult {
  ComplexMatrix v;
  double objective = 0.0;
  long iters = 0;
};

/// Exact Euclidean projection onto the Frobenius ball ||V||_F^2 <= p_max.
void project_to_power_ball(ComplexMatrix& v, double p_max);

/// Minimizes ||H_eff V - sqrt(p_w) D_tilde||_F^2 over the Frobenius ball of
/// radius sqrt(p_max) by projected gradient descent.
OracleResult oracle_weighted(const ComplexMatrix& h_eff, const ComplexMatrix& d_tilde, double p_w,
                             double p_max, const OracleConfig& cfg);

struct ConstrainedOracleResult {
  bool feasible = false;
  ComplexMatrix v;
  double leakage = 0.0;
  double deviation = 0.0;
};

/// Minimizes cell leakage subject to deviation <= delta and the power ball,
/// via exterior quadratic penalty with an increasing weight schedule. Declares
/// the instance infeasible when the deviation cannot be driven to delta.
ConstrainedOracleResult oracle_constrained_leakage(const ChannelSet& channels,
                                                   const DemandSet& demand, int cell, double delta,
                                                   double p_w, double p_max,
                                                   const OracleConfig& cfg);

}  // namespace wnv
