#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace wick2d {

// Counter-based RNG: every draw is a pure function of (seed, counter words).
// splitmix64 finalizer applied to a simple injective combination; fixed
// constants so streams are reproducible across platforms.
namespace rng {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash3(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc908ULL);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  return h;
}

// uniform in (0,1]; never returns 0 so log() is safe
inline double u01(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Standard complex Gaussian with E|g|^2 = 1 (re/im independent N(0,1/2)),
// a pure function of (seed, key).
inline std::complex<double> complex_gaussian(std::uint64_t seed, std::uint64_t key) {
  const std::uint64_t b1 = hash3(seed, key, 0x243f6a8885a308d3ULL);
  const std::uint64_t b2 = hash3(seed, key, 0x13198a2e03707344ULL);
  const double r = std::sqrt(-std::log(u01(b1)));
  const double th = 2.0 * M_PI * u01(b2);
  return {r * std::cos(th), r * std::sin(th)};
}

// derive an independent stream seed (per-sample streams)
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return hash3(seed, stream, 0xa4093822299f31d0ULL);
}

// pack a lattice point into a key; coordinates fit easily in 20 bits
inline std::uint64_t pack_point(int nx, int ny) {
  const std::uint64_t ux = static_cast<std::uint64_t>(nx + (1 << 20));
  const std::uint64_t uy = static_cast<std::uint64_t>(ny + (1 << 20));
  return (ux << 21) | uy;
}

}  // namespace rng
}  // namespace wick2d
