#pragma once

#include <string>
#include <vector>

#include "qwalk/step_set.hpp"

namespace qwalk {

// Half-plane normal direction as a reduced nonnegative rational slope p/q
// (the half-plane is {p*x + q*y >= 0}). delta_used records the approximation
// radius that produced it, 0 when the slope is exact.
struct RationalSlope {
  long long p = 0;
  long long q = 1;
  double delta_used = 0.0;
};

// One integer-weighted terminal per step-multiset element. Identity is
// preserved: two distinct 2D steps with equal projected weight stay distinct
// terminals, so multiset multiplicities weight counts and samples correctly.
struct OneDTerminal {
  int id = 0;            // dense terminal id == index in OneDModel::terminals
  long long weight = 0;  // dx*p + dy*q
  int origin_index = 0;  // index into the source StepSet
};

struct OneDModel {
  std::vector<OneDTerminal> terminals;
  long long a_bar = 0;  // largest upward weight
  long long b_bar = 0;  // largest downward weight (as a positive number)
};

// Projects each step onto the half-plane normal. Throws errc::triviality when
// the result has no positive or no negative weight (the 1D walk language
// would be finite/degenerate), naming the missing side.
OneDModel project(const StepSet& s, const RationalSlope& slope);

// Divides all weights by their common gcd; the positive-prefix language (and
// hence every count) is unchanged, but the grammar shrinks.
OneDModel normalize(const OneDModel& m);

// The rational p/q with the smallest denominator satisfying |m - p/q| <=
// delta, via Stern-Brocot descent on the exact interval (inputs converted to
// exact binary rationals, so no floating-point ambiguity at the boundary).
RationalSlope rational_approx(double m, double delta);

struct DeltaPolicy {
  enum class Kind { exact, sqrt, fixed };
  Kind kind = Kind::exact;
  double value = 0.0;  // for Kind::fixed

  static DeltaPolicy parse(const std::string& text);  // "exact" | "sqrt" | "fixed:<delta>"
  std::string to_string() const;
};

// exact -> 1/(n+1) (the radius that provably isolates the optimal model);
// sqrt -> 1/sqrt(n) (experimental, motivated by an unproven conjecture);
// fixed -> the given delta.
double choose_delta(long long n, const DeltaPolicy& policy);

}  // namespace qwalk
