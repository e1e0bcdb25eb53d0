#pragma once
// Deterministic random utilities. All sampling in this project goes through
// these helpers (not std::*_distribution) so that a given seed produces the
// same stream on every platform/toolchain.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace epinet {

using Rng = std::mt19937_64;

// Large sentinel for "event never happens"; safe to add to any step index.
inline constexpr int kNever = std::numeric_limits<int>::max() / 4;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d4a2fcf57dce1dULL;
  return x ^ (x >> 31);
}

// Stable 64-bit combine for deriving per-task seeds from a master seed.
struct SeedMix {
  std::uint64_t h;
  explicit SeedMix(std::uint64_t master) : h(splitmix64(master ^ 0x6a09e667f3bcc909ULL)) {}
  SeedMix& mix(std::uint64_t v) {
    h = splitmix64(h ^ v);
    return *this;
  }
  SeedMix& mix(std::string_view s) {
    std::uint64_t f = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : s) {
      f ^= c;
      f *= 0x100000001b3ULL;
    }
    return mix(f);
  }
  std::uint64_t value() const { return h; }
  Rng rng() const { return Rng(h); }
};

// Uniform double in (0, 1]; strictly positive so log() is safe.
inline double uniform01(Rng& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

// Uniform integer in [0, n). Masked rejection keeps it unbiased.
inline std::int64_t uniform_index(Rng& rng, std::int64_t n) {
  if (n <= 1) return 0;
  std::uint64_t un = static_cast<std::uint64_t>(n);
  int bits = 64 - __builtin_clzll(un - 1);
  std::uint64_t mask = (bits >= 64) ? ~0ULL : ((1ULL << bits) - 1);
  for (;;) {
    std::uint64_t v = rng() & mask;
    if (v < un) return static_cast<std::int64_t>(v);
  }
}

inline int uniform_int(Rng& rng, int n) { return static_cast<int>(uniform_index(rng, n)); }

inline bool bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01(rng) <= p;
}

// Number of Bernoulli(p) trials up to and including the first success,
// support {1, 2, ...}. Sampled by inversion: ceil(log(u) / log(1-p)).
// log1mp = precomputed log(1-p); pass -inf for p = 1.
inline int geometric_from_log(Rng& rng, double log1mp) {
  if (log1mp == -std::numeric_limits<double>::infinity()) return 1;  // p == 1
  if (!(log1mp < 0.0)) return kNever;                                // p <= 0
  double u = uniform01(rng);
  double k = std::ceil(std::log(u) / log1mp);
  if (k < 1.0) return 1;
  if (k >= static_cast<double>(kNever)) return kNever;
  return static_cast<int>(k);
}

inline int geometric(Rng& rng, double p) {
  if (p >= 1.0) return 1;
  if (p <= 0.0) return kNever;
  return geometric_from_log(rng, std::log1p(-p));
}

// Standard normal via Box-Muller (no state; draws two uniforms per call).
inline double normal01(Rng& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace epinet
