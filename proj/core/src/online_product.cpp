#include "qwalk/online_product.hpp"

#include <algorithm>
#include <cstring>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr long long kLimbBits = GMP_NUMB_BITS;
static_assert(GMP_NUMB_BITS == GMP_LIMB_BITS, "nail builds of GMP are not supported");

long long ceil_log2(long long v) {
  long long r = 0;
  while ((1LL << r) < v) ++r;
  return r;
}

// Largest bit size over c[lo..hi], 0 if the whole range is zero.
long long range_max_bits(const std::vector<BigInt>& c, long long lo, long long hi) {
  long long best = 0;
  for (long long i = lo; i <= hi; ++i) {
    if (mpz_sgn(c[static_cast<size_t>(i)].get_mpz_t()) == 0) continue;
    best = std::max(
        best, static_cast<long long>(mpz_sizeinbase(c[static_cast<size_t>(i)].get_mpz_t(), 2)));
  }
  return best;
}

// Writes c[lo..hi] into buf as consecutive w_bits-wide slots (slot k holds
// c[lo+k]). Slots may straddle limb boundaries; values never straddle slots.
void pack_range(const std::vector<BigInt>& c, long long lo, long long hi, long long w_bits,
                std::vector<mp_limb_t>& buf, std::vector<mp_limb_t>& scratch) {
  const long long count = hi - lo + 1;
  const size_t limbs = static_cast<size_t>((count * w_bits) / kLimbBits + 2);
  buf.assign(limbs, 0);
  for (long long k = 0; k < count; ++k) {
    const mpz_srcptr v = c[static_cast<size_t>(lo + k)].get_mpz_t();
    const size_t nl = mpz_size(v);
    if (nl == 0) continue;
    const mp_limb_t* p = mpz_limbs_read(v);
    const long long bit_off = k * w_bits;
    const size_t limb_off = static_cast<size_t>(bit_off / kLimbBits);
    const unsigned shift = static_cast<unsigned>(bit_off % kLimbBits);
    if (shift == 0) {
      for (size_t i = 0; i < nl; ++i) buf[limb_off + i] |= p[i];
    } else {
      scratch.resize(nl);
      const mp_limb_t spill = mpn_lshift(scratch.data(), p, static_cast<mp_size_t>(nl), shift);
      for (size_t i = 0; i < nl; ++i) buf[limb_off + i] |= scratch[i];
      buf[limb_off + nl] |= spill;
    }
  }
}

// Reads the w_bits-wide slot starting at bit_off out of (p, pn) into out.
void read_slot(const mp_limb_t* p, size_t pn, long long bit_off, long long w_bits,
               BigInt& out, std::vector<mp_limb_t>& scratch) {
  const size_t limb_off = static_cast<size_t>(bit_off / kLimbBits);
  if (limb_off >= pn) {
    out = 0;
    return;
  }
  const unsigned shift = static_cast<unsigned>(bit_off % kLimbBits);
  const size_t want = static_cast<size_t>(w_bits / kLimbBits + 2);
  const size_t have = std::min(want, pn - limb_off);
  scratch.assign(want + 1, 0);
  if (shift == 0) {
    std::memcpy(scratch.data(), p + limb_off, have * sizeof(mp_limb_t));
  } else {
    mpn_rshift(scratch.data(), p + limb_off, static_cast<mp_size_t>(have), shift);
    if (limb_off + have < pn)
      scratch[have - 1] |= p[limb_off + have] << (kLimbBits - shift);
  }
  // Clear bits at and above w_bits.
  const size_t full = static_cast<size_t>(w_bits / kLimbBits);
  const unsigned rem = static_cast<unsigned>(w_bits % kLimbBits);
  if (rem == 0) {
    for (size_t i = full; i < scratch.size(); ++i) scratch[i] = 0;
  } else {
    scratch[full] &= (static_cast<mp_limb_t>(1) << rem) - 1;
    for (size_t i = full + 1; i < scratch.size(); ++i) scratch[i] = 0;
  }
  size_t n = scratch.size();
  while (n > 0 && scratch[n - 1] == 0) --n;
  mpz_import(out.get_mpz_t(), n, -1, sizeof(mp_limb_t), 0, 0, scratch.data());
}

}  // namespace

OnlineProduct::OnlineProduct(const std::vector<BigInt>* a, const std::vector<BigInt>* b,
                             long long n_max, long long base_block)
    : a_(a), b_(b), n_max_(n_max), b0_(base_block) {
  if (!a || !b) fail(errc::argument, "online product needs both input streams");
  if (n_max < 0 || base_block < 1) fail(errc::argument, "bad online product geometry");
  pending_.resize(static_cast<size_t>(n_max) + 1);
}

size_t OnlineProduct::pending_bytes() const {
  size_t total = pending_.size() * sizeof(BigInt);
  for (const auto& v : pending_) total += mpz_size(v.get_mpz_t()) * sizeof(mp_limb_t);
  return total;
}

void OnlineProduct::add_tile(long long a_start, long long b_start, long long s) {
  // Indices whose partner range cannot reach n_max any more are useless; this
  // in particular trims the large late tiles that would mostly overshoot.
  const long long a_hi = std::min(a_start + s - 1, n_max_ - b_start);
  const long long b_hi = std::min(b_start + s - 1, n_max_ - a_start);
  if (a_hi < a_start || b_hi < b_start) return;

  const long long bits_a = range_max_bits(*a_, a_start, a_hi);
  const long long bits_b = range_max_bits(*b_, b_start, b_hi);
  if (bits_a == 0 || bits_b == 0) return;
  const long long w = bits_a + bits_b + ceil_log2(s) + 2;

  std::vector<mp_limb_t> scratch;
  pack_range(*a_, a_start, a_hi, w, pack_a_, scratch);
  pack_range(*b_, b_start, b_hi, w, pack_b_, scratch);

  size_t na = pack_a_.size(), nb = pack_b_.size();
  while (na > 0 && pack_a_[na - 1] == 0) --na;
  while (nb > 0 && pack_b_[nb - 1] == 0) --nb;
  if (na == 0 || nb == 0) return;

  mpz_t za, zb;
  mpz_roinit_n(za, pack_a_.data(), static_cast<mp_size_t>(na));
  mpz_roinit_n(zb, pack_b_.data(), static_cast<mp_size_t>(nb));
  BigInt prod;
  mpz_mul(prod.get_mpz_t(), za, zb);

  const mp_limb_t* pp = mpz_limbs_read(prod.get_mpz_t());
  const size_t pn = mpz_size(prod.get_mpz_t());
  const long long slots = (a_hi - a_start) + (b_hi - b_start) + 1;
  BigInt slot;
  for (long long k = 0; k < slots; ++k) {
    const long long target = a_start + b_start + k;
    if (target > n_max_) break;
    read_slot(pp, pn, k * w, w, slot, scratch);
    if (mpz_sgn(slot.get_mpz_t()) != 0)
      pending_[static_cast<size_t>(target)] += slot;
  }
}

BigInt OnlineProduct::advance(long long l) {
  if (l != next_ || l > n_max_)
    fail(errc::argument, "online product indices must be consumed in order");
  ++next_;

  // Tiles whose inputs completed exactly now.
  for (long long s = b0_; s <= l && l % s == 0; s *= 2) {
    const long long big = l / s - 1;
    if (big == 1) {
      add_tile(s, s, s);
    } else if (big >= 2) {
      add_tile(big * s, s, s);
      add_tile(s, big * s, s);
    }
  }

  BigInt out;
  mpz_swap(out.get_mpz_t(), pending_[static_cast<size_t>(l)].get_mpz_t());

  // Strip pairs: j < b0 (top), and i < b0 with j >= b0 (bottom).
  const auto& a = *a_;
  const auto& b = *b_;
  for (long long m = std::max<long long>(0, l - b0_ + 1); m <= l; ++m) {
    if (mpz_sgn(a[static_cast<size_t>(m)].get_mpz_t()) == 0) continue;
    if (mpz_sgn(b[static_cast<size_t>(l - m)].get_mpz_t()) == 0) continue;
    mpz_addmul(out.get_mpz_t(), a[static_cast<size_t>(m)].get_mpz_t(),
               b[static_cast<size_t>(l - m)].get_mpz_t());
  }
  const long long bot_hi = std::min(b0_ - 1, l - b0_);
  for (long long m = 0; m <= bot_hi; ++m) {
    if (mpz_sgn(a[static_cast<size_t>(m)].get_mpz_t()) == 0) continue;
    if (mpz_sgn(b[static_cast<size_t>(l - m)].get_mpz_t()) == 0) continue;
    mpz_addmul(out.get_mpz_t(), a[static_cast<size_t>(m)].get_mpz_t(),
               b[static_cast<size_t>(l - m)].get_mpz_t());
  }
  return out;
}

}  // namespace qwalk
