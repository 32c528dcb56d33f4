#include "qwalk/projection.hpp"

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "qwalk/errors.hpp"

namespace qwalk {

OneDModel project(const StepSet& s, const RationalSlope& slope) {
  if (slope.p < 0 || slope.q < 0 || (slope.p == 0 && slope.q == 0))
    fail(errc::argument, "projection slope must be a nonnegative pair, not both zero");
  OneDModel m;
  m.terminals.reserve(s.size());
  bool has_up = false, has_down = false;
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    const Step st = s[i];
    const long long w = static_cast<long long>(st.dx) * slope.p +
                        static_cast<long long>(st.dy) * slope.q;
    if (w > 0) has_up = true;
    if (w < 0) has_down = true;
    m.terminals.push_back(OneDTerminal{i, w, i});
  }
  if (!has_up)
    fail(errc::triviality,
         "projected model has no positive-weight step; every walk is trapped at the wall");
  if (!has_down)
    fail(errc::triviality,
         "projected model has no negative-weight step; the wall constraint never binds");
  for (const auto& t : m.terminals) {
    if (t.weight > 0) m.a_bar = std::max(m.a_bar, t.weight);
    if (t.weight < 0) m.b_bar = std::max(m.b_bar, -t.weight);
  }
  return m;
}

OneDModel normalize(const OneDModel& m) {
  long long g = 0;
  for (const auto& t : m.terminals)
    g = std::gcd(g, std::llabs(t.weight));
  if (g <= 1) return m;
  OneDModel out = m;
  for (auto& t : out.terminals) t.weight /= g;
  out.a_bar = m.a_bar / g;
  out.b_bar = m.b_bar / g;
  return out;
}

namespace {

// Smallest-denominator fraction in the closed interval [lo, hi], 0 <= lo <=
// hi. Classic continued-fraction recursion: if the interval contains an
// integer, the smallest such integer wins (denominator 1, and among
// denominator-1 candidates the smallest numerator); otherwise both bounds
// share the integer part a and the answer is a + 1/simplest(1/hi', 1/lo').
mpq_class simplest_in_interval(const mpq_class& lo, const mpq_class& hi) {
  mpz_class lo_ceil = lo.get_num() / lo.get_den();
  if (lo_ceil * lo.get_den() < lo.get_num()) lo_ceil += 1;  // ceil for nonneg lo
  if (mpq_class(lo_ceil) <= hi) return mpq_class(lo_ceil);
  // floor(lo) == floor(hi) == lo_ceil - 1 here, and neither bound is integral.
  mpz_class a = lo_ceil - 1;
  mpq_class lo_frac = lo - mpq_class(a);
  mpq_class hi_frac = hi - mpq_class(a);
  mpq_class inner = simplest_in_interval(1 / hi_frac, 1 / lo_frac);
  return mpq_class(a) + 1 / inner;
}

}  // namespace

RationalSlope rational_approx(double m, double delta) {
  if (!std::isfinite(m) || m < 0)
    fail(errc::argument, "rational approximation target must be finite and nonnegative");
  if (!std::isfinite(delta) || delta <= 0)
    fail(errc::argument, "rational approximation radius must be positive");
  mpq_class target(m);  // exact: doubles are binary rationals
  mpq_class radius(delta);
  mpq_class lo = target - radius;
  if (lo < 0) lo = 0;
  mpq_class hi = target + radius;
  mpq_class best = simplest_in_interval(lo, hi);
  best.canonicalize();
  if (!best.get_num().fits_slong_p() || !best.get_den().fits_slong_p())
    fail(errc::numeric, "rational approximation overflowed long long");
  RationalSlope out;
  out.p = best.get_num().get_si();
  out.q = best.get_den().get_si();
  out.delta_used = delta;
  return out;
}

DeltaPolicy DeltaPolicy::parse(const std::string& text) {
  DeltaPolicy p;
  if (text == "exact") {
    p.kind = Kind::exact;
  } else if (text == "sqrt") {
    p.kind = Kind::sqrt;
  } else if (text.rfind("fixed:", 0) == 0) {
    p.kind = Kind::fixed;
    try {
      size_t pos = 0;
      p.value = std::stod(text.substr(6), &pos);
      if (pos != text.size() - 6) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
      fail(errc::parse, "bad fixed delta in '" + text + "'");
    }
    if (!(p.value > 0)) fail(errc::parse, "fixed delta must be positive in '" + text + "'");
  } else {
    fail(errc::parse, "unknown delta policy '" + text + "' (want exact|sqrt|fixed:<delta>)");
  }
  return p;
}

std::string DeltaPolicy::to_string() const {
  switch (kind) {
    case Kind::exact: return "exact";
    case Kind::sqrt: return "sqrt";
    case Kind::fixed: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "fixed:%.17g", value);
      return buf;
    }
  }
  return "?";
}

double choose_delta(long long n, const DeltaPolicy& policy) {
  if (n < 1) fail(errc::argument, "delta policy needs walk length >= 1");
  switch (policy.kind) {
    case DeltaPolicy::Kind::exact: return 1.0 / (static_cast<double>(n) + 1.0);
    case DeltaPolicy::Kind::sqrt: return 1.0 / std::sqrt(static_cast<double>(n));
    case DeltaPolicy::Kind::fixed: return policy.value;
  }
  fail(errc::argument, "unknown delta policy");
}

}  // namespace qwalk
