#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "qwalk/rng.hpp"

namespace qwalk {

// Walk counts grow like 6^2000; they are always held exactly. Floats appear
// only in growth/exponent estimators, via log_of below.
using BigInt = mpz_class;

// Exact rational, used where probabilities must be verified to cancel
// perfectly (e.g. the telescoping product of the recursive sampler).
using BigRat = mpq_class;

// Natural log of a positive big integer, accurate to double precision.
double log_of(const BigInt& v);

// log2, usable for size estimates (returns 0 for v <= 0).
double log2_of(const BigInt& v);

// Uniform draw in [0, bound), exact and unbiased: draw ceil(bits/64) words,
// mask to the bit width of bound-1, reject values >= bound. Word order is
// fixed (least significant limb first) so the consumed random stream, and
// therefore every sampled structure, is reproducible.
BigInt uniform_below(const BigInt& bound, Rng& rng);

std::string to_decimal(const BigInt& v);

}  // namespace qwalk
