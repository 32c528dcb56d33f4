#include "qwalk/bigint.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

double log_of(const BigInt& v) {
  if (v <= 0) fail(errc::domain, "log_of: argument must be positive");
  signed long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

double log2_of(const BigInt& v) {
  if (v <= 0) return 0.0;
  signed long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp2);
}

BigInt uniform_below(const BigInt& bound, Rng& rng) {
  if (bound <= 0) fail(errc::domain, "uniform_below: bound must be positive");
  if (bound == 1) return BigInt(0);

  BigInt top = bound - 1;
  std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
  std::size_t words = (bits + 63) / 64;
  int top_bits = static_cast<int>(bits - 64 * (words - 1));  // in [1, 64]
  std::uint64_t top_mask = (top_bits >= 64) ? ~0ULL : ((1ULL << top_bits) - 1);

  std::vector<std::uint64_t> buf(words);
  BigInt v;
  for (;;) {
    for (std::size_t i = 0; i < words; ++i) buf[i] = rng.next_u64();
    buf[words - 1] &= top_mask;
    mpz_import(v.get_mpz_t(), words, -1 /*LSW first*/, sizeof(std::uint64_t), 0, 0, buf.data());
    if (v < bound) return v;
  }
}

std::string to_decimal(const BigInt& v) { return v.get_str(10); }

}  // namespace qwalk
