#pragma once

#include <cstdint>
#include <random>

namespace qwalk {

// Deterministic random source. std::mt19937_64 has a fully specified output
// sequence, so identical seeds give identical walks on every platform; that is
// the foundation of the CLI's byte-reproducibility contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Unbiased uniform draw in [0, bound) by rejection from the masked word.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    int bits = 64 - countl_zero_u64(bound - 1);
    std::uint64_t mask = (bits >= 64) ? ~0ULL : ((1ULL << bits) - 1);
    for (;;) {
      std::uint64_t v = eng_() & mask;
      if (v < bound) return v;
    }
  }

 private:
  static int countl_zero_u64(std::uint64_t x) {
    if (x == 0) return 64;
    return __builtin_clzll(x);
  }
  std::mt19937_64 eng_;
};

// splitmix64 finalizer: the standard 64-bit avalanche mix.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stream derivation for deterministic parallelism: every (sample, trial) pair
// gets an independent seed, so trials can run in any order or concurrently and
// still reproduce the sequential output bit for bit.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t sample_index,
                                   std::uint64_t trial_index) {
  std::uint64_t h = mix64(seed ^ 0xA0761D6478BD642FULL);
  h = mix64(h ^ (sample_index + 0xE7037ED1A0B428DBULL));
  h = mix64(h ^ (trial_index + 0x8EBC6AF09C88C6E3ULL));
  return h;
}

}  // namespace qwalk
