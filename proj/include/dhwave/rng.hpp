#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dhwave {

// Counter-based Gaussian draws: every (seed, sample, step, mode) tuple maps
// to a fixed pair of independent N(0,1) variates, independent of evaluation
// order and thread count.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct GaussianPair {
  double a;
  double b;
};

inline GaussianPair gaussian_pair(std::uint64_t seed, std::uint64_t sample,
                                  std::uint64_t step, std::uint64_t mode) {
  std::uint64_t h = splitmix64(seed ^ 0x8f1bbcdcbfa53e0bULL);
  h = splitmix64(h ^ sample);
  h = splitmix64(h ^ step);
  h = splitmix64(h ^ mode);
  std::uint64_t u0 = splitmix64(h);
  std::uint64_t u1 = splitmix64(h ^ 0xd6e8feb86659fd93ULL);
  // (0,1] uniforms from the top 53 bits.
  double v0 = static_cast<double>((u0 >> 11) + 1) * 0x1.0p-53;
  double v1 = static_cast<double>(u1 >> 11) * 0x1.0p-53;
  double rad = std::sqrt(-2.0 * std::log(v0));
  double ang = 2.0 * std::numbers::pi * v1;
  return {rad * std::cos(ang), rad * std::sin(ang)};
}

}  // namespace dhwave
