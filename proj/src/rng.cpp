#include "wnv/rng.hpp"

#include <cmath>
#include <numbers>

namespace wnv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::string_view stream) {
  return splitmix64(splitmix64(splitmix64(master) ^ index) ^ fnv1a(stream));
}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double a, double b) { return a + (b - a) * uniform(); }

double RandomStream::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> RandomStream::cnormal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log(u1));  // -2 ln u / 2: unit total variance
  return {r * std::cos(2.0 * std::numbers::pi * u2), r * std::sin(2.0 * std::numbers::pi * u2)};
}

}  // namespace wnv
