#pragma once

#include <optional>

#include "qwalk/step_set.hpp"

namespace qwalk {

// Unique positive critical point (alpha, beta) of the inventory polynomial,
// i.e. the positive solution of S_x = S_y = 0. Its value S(alpha,beta) is the
// growth factor of quadrant walk counts.
struct CriticalPoint {
  double alpha = 1.0;
  double beta = 1.0;
  double s_value = 0.0;
  double gradient_norm = 0.0;  // residual |(S_x, S_y)| at (alpha, beta)
};

enum class SlopeKind {
  rational,    // m detected as p/q (q <= 64) or exact by symmetry
  irrational,  // no small-denominator match; sampler will approximate
  boundary,    // forced axis direction: singular model or beta = 1 (m = inf)
};

struct SlopeInfo {
  std::optional<CriticalPoint> critical;
  double theta_star = 0.0;  // optimal half-plane angle in [0, pi/2]
  double slope_m = 0.0;     // tan(theta_star); +infinity when beta = 1
  SlopeKind kind = SlopeKind::boundary;
  long long p = 0, q = 1;  // populated for rational/boundary kinds, gcd(p,q) = 1
  double rho_inv = 0.0;    // S(alpha,beta); NaN when singular
  std::optional<double> r_variant_a;  // exponent candidates, reluctant models only
  std::optional<double> r_variant_b;
};

// Minimizes S(e^u, e^v), which is convex in (u,v), by damped Newton from the
// origin. Returns nullopt when the iterates diverge, meaning the infimum is
// not attained and the model is singular. Throws errc::numeric if the
// iteration cap (200) passes without either verdict.
std::optional<CriticalPoint> critical_point(const StepSet& s);

// Slope selection: singular -> m = 0, direction (0,1); beta = 1 -> m = inf,
// direction (1,0); otherwise m = ln(alpha)/ln(beta) with a rationality
// detector (denominator scan q <= 64 at relative tolerance 1e-9;
// transpose-symmetric sets short-circuit to exact (1,1)).
SlopeInfo optimal_slope(const StepSet& s);

// The subexponential exponent r in counts ~ growth^n * n^(-r), for reluctant
// models. The two variants are the two readings of an ambiguously typeset
// formula; variant A (1 + pi/acos(-c)) is the calibrated default, confirmed
// against count fits by the acceptance suite.
enum class ExponentVariant { A, B };
inline constexpr ExponentVariant kDefaultExponentVariant = ExponentVariant::A;

double exponent_r(const StepSet& s, ExponentVariant variant);

}  // namespace qwalk
