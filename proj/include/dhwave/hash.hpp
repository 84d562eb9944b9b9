#pragma once

#include <cstdint>
#include <string_view>

namespace dhwave {

// FNV-1a 64-bit digest; used for config hashes and calibration grid ids.
inline std::uint64_t fnv1a(std::string_view data,
                           std::uint64_t seed = 14695981039346656037ull) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace dhwave
