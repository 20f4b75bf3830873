#ifndef DGX_RNG_H_
#define DGX_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace dgx {

using Rng = std::mt19937_64;

// Derives an independent stream seed from a run seed and a stream label, so
// that e.g. the split stream never perturbs the topology stream.
uint64_t DeriveSeed(uint64_t seed, std::string_view stream, uint64_t index = 0);

inline Rng MakeRng(uint64_t seed, std::string_view stream, uint64_t index = 0) {
  return Rng(DeriveSeed(seed, stream, index));
}

// Uniform integer in [0, bound). Written out instead of
// std::uniform_int_distribution so generated graphs do not depend on the
// standard library's distribution implementation.
inline uint64_t UniformIndex(Rng& rng, uint64_t bound) {
  const uint64_t limit = Rng::max() - Rng::max() % bound;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller (one value per call).
double StandardNormal(Rng& rng);

}  // namespace dgx

#endif  // DGX_RNG_H_
