#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace acmeter {

// Distribution helpers built directly on mt19937 output. The standard
// distributions are implementation-defined, these are not, so seeded runs
// are reproducible across toolchains.

inline double uniform01(std::mt19937& g) {
  const std::uint64_t hi = g();
  const std::uint64_t lo = g();
  return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

/// Uniform integer in [lo, hi], inclusive, rejection-sampled to avoid bias.
inline int uniform_int(std::mt19937& g, int lo, int hi) {
  const std::uint32_t n = static_cast<std::uint32_t>(hi - lo) + 1u;
  if (n == 0) return lo + static_cast<int>(g());  // full 32-bit span
  const std::uint32_t limit = 0xffffffffu - 0xffffffffu % n;
  std::uint32_t x;
  do {
    x = g();
  } while (x >= limit);
  return lo + static_cast<int>(x % n);
}

inline double exponential(std::mt19937& g, double mean) {
  return -mean * std::log(1.0 - uniform01(g));
}

}  // namespace acmeter
