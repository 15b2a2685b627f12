#include "wnv/oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wnv {

void project_to_power_ball(ComplexMatrix& v, double p_max) {
  const double power = fro_norm_sq(v);
  if (power > p_max) v = scale(v, std::sqrt(p_max / power));
}

namespace {

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    s += a.entries()[i].real() * b.entries()[i].real() +
         a.entries()[i].imag() * b.entries()[i].imag();
  }
  return s;
}

[[noreturn]] void throw_no_convergence(const char* who, const std::vector<double>& trace_tail) {
  std::ostringstream os;
  os << who << ": no convergence; objective tail:";
  os.precision(12);
  for (double v : trace_tail) os << " " << std::scientific << v;
  throw std::runtime_error(os.str());
}

}  // namespace

namespace {

void validate_oracle_config(const OracleConfig& cfg) {
  if (!(cfg.step_scale > 0.0) || !(cfg.obj_rel_tol > 0.0) || cfg.max_iters < 1) {
    throw std::invalid_argument("oracle: step_scale, obj_rel_tol and max_iters must be positive");
  }
}

}  // namespace

OracleResult oracle_weighted(const ComplexMatrix& h_eff, const ComplexMatrix& d_tilde, double p_w,
                             double p_max, const OracleConfig& cfg) {
  validate_oracle_config(cfg);
  const ComplexMatrix hh = hermitian(h_eff);
  const ComplexMatrix gram = matmul(hh, h_eff);
  const ComplexMatrix target = scale(d_tilde, std::sqrt(p_w));
  const double lipschitz = 2.0 * fro_norm(gram);
  if (!(lipschitz > 0.0)) {
    return {ComplexMatrix(h_eff.cols(), d_tilde.cols()), fro_norm_sq(target), 0};
  }
  const double step = cfg.step_scale / lipschitz;

  ComplexMatrix v(h_eff.cols(), d_tilde.cols());
  double obj = fro_norm_sq(target);  // objective at V = 0
  const double obj0 = obj;
  std::vector<double> tail;
  for (long it = 1; it <= cfg.max_iters; ++it) {
    const ComplexMatrix residual = sub(matmul(h_eff, v), target);
    v = sub(v, scale(matmul(hh, residual), 2.0 * step));
    project_to_power_ball(v, p_max);
    const double next = fro_norm_sq(sub(matmul(h_eff, v), target));
    const double change = std::abs(obj - next);
    obj = next;
    if (change <= cfg.obj_rel_tol * std::max(obj, 1e-9 * obj0)) {
      return {std::move(v), obj, it};
    }
    if (it > cfg.max_iters - 8) tail.push_back(obj);
  }
  throw_no_convergence("oracle_weighted", tail);
}

ConstrainedOracleResult oracle_constrained_leakage(const ChannelSet& channels,
                                                   const DemandSet& demand, int cell, double delta,
                                                   double p_w, double p_max,
                                                   const OracleConfig& cfg) {
  validate_oracle_config(cfg);
  if (delta < 0.0) throw std::invalid_argument("oracle_constrained_leakage: delta must be >= 0");
  const int cells = channels.num_cells();
  const ComplexMatrix& h_own = channels.bar_block(cell, cell);
  const ComplexMatrix target = scale(demand.d[cell], std::sqrt(p_w));

  // Quadratic forms for leakage and deviation.
  ComplexMatrix gram_leak(channels.antennas[cell], channels.antennas[cell]);
  for (int l = 0; l < cells; ++l) {
    if (l == cell) continue;
    const ComplexMatrix& b = channels.bar_block(l, cell);
    gram_leak = add(gram_leak, matmul(hermitian(b), b));
  }
  const ComplexMatrix h_own_h = hermitian(h_own);
  const ComplexMatrix gram_own = matmul(h_own_h, h_own);
  const ComplexMatrix rhs_own = matmul(h_own_h, target);

  auto leak_of = [&](const ComplexMatrix& v) { return real_inner(v, matmul(gram_leak, v)); };
  auto dev_of = [&](const ComplexMatrix& v) {
    return fro_norm_sq(sub(matmul(h_own, v), target));
  };

  const double dev_at_zero = fro_norm_sq(target);
  const double t0 = 100.0 / std::max(dev_at_zero, std::numeric_limits<double>::min());
  // The deviation multiplier blows up at the feasibility boundary, so the
  // final weight must reach ~1e13 relative to the problem scale.
  constexpr int kRounds = 12;

  ComplexMatrix v(channels.antennas[cell], target.cols());
  double penalty = t0;
  for (int round = 0; round < kRounds; ++round, penalty *= 10.0) {
    auto objective = [&](double leak, double dev) {
      const double excess = std::max(0.0, dev - delta);
      return leak + penalty * excess * excess;
    };
    double obj = objective(leak_of(v), dev_of(v));
    const double obj_floor = std::max(obj, dev_at_zero);
    double step = cfg.step_scale /
                  (2.0 * (fro_norm(gram_leak) +
                          fro_norm(gram_own) *
                              (1.0 + 2.0 * penalty * std::max(0.0, dev_at_zero - delta))) +
                   std::numeric_limits<double>::min());
    for (long it = 0; it < cfg.max_iters; ++it) {
      const double dev = dev_of(v);
      const double excess = std::max(0.0, dev - delta);
      ComplexMatrix grad = scale(matmul(gram_leak, v), 2.0);
      if (excess > 0.0) {
        const ComplexMatrix dev_grad = scale(sub(matmul(gram_own, v), rhs_own), 2.0);
        grad = add(grad, scale(dev_grad, 2.0 * penalty * excess));
      }
      // Backtracking keeps the iterates monotone regardless of penalty size.
      bool accepted = false;
      double change = 0.0;
      for (int half = 0; half < 80 && !accepted; ++half) {
        ComplexMatrix cand = sub(v, scale(grad, step));
        project_to_power_ball(cand, p_max);
        const double cand_obj = objective(leak_of(cand), dev_of(cand));
        if (cand_obj <= obj) {
          change = obj - cand_obj;
          v = std::move(cand);
          obj = cand_obj;
          accepted = true;
          step = std::min(step * 1.3, 1e30);
        } else {
          step *= 0.5;
        }
      }
      // Step underflow or a vanishing improvement: this round is done.
      if (!accepted || change <= cfg.obj_rel_tol * std::max(obj, 1e-9 * obj_floor)) break;
    }
  }

  ConstrainedOracleResult result;
  result.deviation = dev_of(v);
  result.leakage = leak_of(v);
  result.feasible = result.deviation <= delta * (1.0 + 1e-6);
  result.v = std::move(v);
  return result;
}

}  // namespace wnv
