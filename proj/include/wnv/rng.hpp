#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace wnv {

/// Derives a child seed from (master seed, index, stream name). Pure function,
/// so re-runs and reordered callers always see the same sub-streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::string_view stream);

/// Seeded random stream. Distributions are hand-rolled on top of mt19937_64
/// so draws are bit-identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [a, b).
  double uniform(double a, double b);
  /// Standard real Gaussian via Box-Muller (no state carried between calls).
  double normal();
  /// Circular complex Gaussian with unit total variance (re, im ~ N(0, 1/2)).
  std::complex<double> cnormal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace wnv
