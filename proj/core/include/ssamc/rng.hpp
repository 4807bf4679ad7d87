#ifndef SSAMC_RNG_HPP
#define SSAMC_RNG_HPP

#include <cmath>
#include <cstdint>

namespace ssamc {

inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ with splitmix64 seeding. Self-contained so that sequences are
/// identical across standard libraries, which the reproducibility contracts
/// depend on.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed) {
    uint64_t z = seed;
    for (auto& w : s_) w = mix64(z++);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n); n must be positive.
  int uniform_int(int n) {
    return int((__uint128_t(next_u64()) * __uint128_t(n)) >> 64);
  }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Independent stream derived from this generator's seed; stable under the
  /// order in which streams are created or consumed.
  Rng split(uint64_t stream) const {
    return Rng(mix64(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
  }

  uint64_t seed() const { return seed_; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t seed_;
  uint64_t s_[4];
};

}  // namespace ssamc

#endif
