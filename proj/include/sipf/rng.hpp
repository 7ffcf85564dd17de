#pragma once

#include <cstdint>

namespace sipf {

// Counter-based random streams: every draw is a pure function of
// (seed, stream, counter, slot), so per-particle noise is independent of
// thread scheduling and runs reproduce bitwise for a fixed seed.
namespace rng {

inline uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline uint64_t mix(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

// Uniform in (0, 1): 53-bit mantissa, never exactly 0 or 1.
inline double uniform01(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t bits = mix(seed, a, b, c) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

// Inverse of the standard normal CDF (Wichura's AS241, |err| ~ 1e-15).
double inverse_normal_cdf(double p);

inline double normal(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  return inverse_normal_cdf(uniform01(seed, a, b, c));
}

// Stream tags keep unrelated draws out of each other's counter space.
enum Stream : uint64_t {
  kInitRadius = 0x100,
  kInitDirection = 0x200,
  kInitBlob = 0x300,
  kStepNoise = 0x400,
};

}  // namespace rng
}  // namespace sipf
