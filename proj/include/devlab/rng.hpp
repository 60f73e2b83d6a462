// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DEVLAB_RNG_HPP
#define DEVLAB_RNG_HPP

#include <cstdint>

namespace devlab {

// splitmix64, used for seeding and for deriving per-trial substreams.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with platform-independent integer/real helpers.  We avoid
// std::uniform_int_distribution and friends because their output is
// implementation-defined: reproducibility across toolchains requires owning
// the whole draw path.
class Rng {
 public:
  explicit Rng(uint64_t seed) { reseed(seed); }

  // Substream constructor: trial k of a run with master seed s draws from
  // Rng(s, k), so results do not depend on how trials are scheduled.
  Rng(uint64_t master_seed, uint64_t stream) {
    uint64_t mix = master_seed;
    splitmix64(mix);
    mix ^= 0x9e3779b97f4a7c15ULL * (stream + 1);
    reseed(mix);
  }

  void reseed(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  uint64_t next() {
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

  // Uniform integer in [0, bound), bound >= 1.  Lemire multiply-shift with
  // rejection; unbiased.
  uint64_t below(uint64_t bound) {
    uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<uint64_t>(m);
    if (lo < bound) {
      const uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * bound;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace devlab

#endif  // DEVLAB_RNG_HPP
