#pragma once

#include <vector>

#include "qwalk/bigint.hpp"

namespace qwalk {

// Exact online Cauchy product c = a * b of two coefficient streams that are
// revealed one index at a time. advance(l) must be called for l = 0, 1, 2, ...
// in order, after a[0..l] and b[0..l] are final, and returns c[l].
//
// Work is organized so that almost all multiplication happens inside large
// balanced products (which GMP executes with fast algorithms) instead of
// coefficient-by-coefficient:
//   - pairs (i, j) with min(i, j) < base_block are folded in directly at
//     l = i + j ("strips");
//   - the remaining quarter-plane of index pairs is covered exactly once by
//     square tiles [I*s, (I+1)*s) x [s, 2*s) and the transpose, s a power-of-
//     two multiple of base_block, each scheduled at l = (I+1)*s when its
//     inputs are complete and its earliest output index is l.
// A tile is multiplied by Kronecker substitution: both coefficient chunks are
// packed into single big integers with fixed-width slots, multiplied once,
// and the slots of the product are unpacked into a pending buffer.
class OnlineProduct {
 public:
  OnlineProduct(const std::vector<BigInt>* a, const std::vector<BigInt>* b,
                long long n_max, long long base_block = 32);

  BigInt advance(long long l);

  long long n_max() const { return n_max_; }
  size_t pending_bytes() const;

 private:
  const std::vector<BigInt>* a_;
  const std::vector<BigInt>* b_;
  long long n_max_;
  long long b0_;
  long long next_ = 0;
  std::vector<BigInt> pending_;
  std::vector<mp_limb_t> pack_a_, pack_b_;  // reused packing buffers

  void add_tile(long long a_start, long long b_start, long long s);
};

}  // namespace qwalk
