#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace stochint::detail::rng {

// SplitMix64 finalizer. Used as the mixing step of a counter-based scheme:
// every variate is a pure function of (seed, stream tag, id triple), so
// generation order and thread count cannot change any value.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag,
                                std::uint64_t a, std::uint64_t b,
                                std::uint64_t c) {
  std::uint64_t h = mix64(seed ^ tag);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  return h;
}

// Uniform in (0,1), never exactly 0 or 1.
inline double to_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

struct NormalPair {
  double first;
  double second;
};

// Box-Muller from two mixed lanes of one key; two N(0,1) variates per call.
inline NormalPair normal_pair(std::uint64_t key) {
  const double u1 = to_unit(mix64(key ^ 0xd1b54a32d192ed03ULL));
  const double u2 = to_unit(mix64(key ^ 0x8bb84b93962eacc9ULL));
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

// Stream tags keep the zeta draws and the path increments in disjoint
// counter spaces even under a shared master seed.
inline constexpr std::uint64_t kTagZeta = 0x5a45544153545231ULL;
inline constexpr std::uint64_t kTagPath = 0x5041544853545232ULL;

// normal(seed, tag, a, b, n): n-th variate of substream (a, b).
// Consecutive n share one Box-Muller evaluation.
inline double normal(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                     std::uint64_t b, std::uint64_t n) {
  const NormalPair p = normal_pair(derive_key(seed, tag, a, b, n >> 1));
  return (n & 1ULL) ? p.second : p.first;
}

}  // namespace stochint::detail::rng
