#pragma once

#include <cstdint>

#include "granet/interval.hpp"

// Test-only Monte-Carlo oracle for the interval comparison. Kept independent
// of the closed form in granet/interval.hpp so it can vouch for it.
namespace testsupport {

struct SplitMix64 {
  std::uint64_t state = 0;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

inline double mc_prob_leq(const granet::Interval& a, const granet::Interval& b,
                          std::uint64_t draws, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const double x = rng.uniform(a.lo, a.hi);
    const double y = rng.uniform(b.lo, b.hi);
    if (x <= y) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(draws);
}

}  // namespace testsupport
