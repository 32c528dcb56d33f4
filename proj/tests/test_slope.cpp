#include <cmath>

#include "doctest.h"
#include "qwalk/errors.hpp"
#include "qwalk/slope.hpp"
#include "qwalk/step_set.hpp"

using namespace qwalk;

namespace {
const char* kFig = "(1,0);(0,1);(-1,0);(1,-1);(-1,-1);(-2,-1)";
const char* kSym = "(1,1);(-1,0);(0,-1);(-1,-1)";
}

TEST_CASE("critical point of the reference reluctant model") {
  const auto cp = critical_point(StepSet::parse(kFig));
  REQUIRE(cp.has_value());
  CHECK(cp->alpha == doctest::Approx(1.2647584795).epsilon(1e-9));
  CHECK(cp->beta == doctest::Approx(1.6372458840).epsilon(1e-9));
  CHECK(cp->s_value == doctest::Approx(5.3299150393).epsilon(1e-9));
  CHECK(cp->gradient_norm < 1e-8);
}

TEST_CASE("optimal slope of the reference model is irrational") {
  const SlopeInfo info = optimal_slope(StepSet::parse(kFig));
  CHECK(info.rho_inv == doctest::Approx(5.3299150393).epsilon(1e-9));
  CHECK(info.slope_m == doctest::Approx(0.476417441).epsilon(1e-8));
  CHECK(info.theta_star == doctest::Approx(std::atan(info.slope_m)).epsilon(1e-12));
  CHECK(info.theta_star == doctest::Approx(0.4446042).epsilon(1e-6));
  CHECK(info.kind == SlopeKind::irrational);
  REQUIRE(info.r_variant_a.has_value());
  REQUIRE(info.r_variant_b.has_value());
  CHECK(*info.r_variant_a == doctest::Approx(2.858721).epsilon(1e-5));
  CHECK(*info.r_variant_b == doctest::Approx(3.164523).epsilon(1e-5));
}

TEST_CASE("transpose-symmetric set pins slope 1/1 exactly") {
  const StepSet s = StepSet::parse(kSym);
  const SlopeInfo info = optimal_slope(s);
  REQUIRE(info.critical.has_value());
  // Critical point sits on the diagonal at the root of t^4 = t + 1.
  CHECK(info.critical->alpha == doctest::Approx(info.critical->beta).epsilon(1e-12));
  const double t = info.critical->alpha;
  CHECK(std::abs(t * t * t * t - t - 1.0) < 1e-9);
  CHECK(t == doctest::Approx(1.2207440846).epsilon(1e-8));
  CHECK(info.rho_inv == doctest::Approx(3.7996).epsilon(1e-4));
  CHECK(info.kind == SlopeKind::rational);
  CHECK(info.p == 1);
  CHECK(info.q == 1);
  CHECK(info.slope_m == 1.0);
  REQUIRE(info.r_variant_a.has_value());
  CHECK(*info.r_variant_a == doctest::Approx(2.3190).epsilon(1e-4));
}

TEST_CASE("transposing the step set inverts the slope") {
  const StepSet s = StepSet::parse(kFig);
  const SlopeInfo a = optimal_slope(s);
  const SlopeInfo b = optimal_slope(s.transposed());
  REQUIRE(a.critical.has_value());
  REQUIRE(b.critical.has_value());
  CHECK(b.critical->alpha == doctest::Approx(a.critical->beta).epsilon(1e-10));
  CHECK(b.critical->beta == doctest::Approx(a.critical->alpha).epsilon(1e-10));
  CHECK(b.critical->s_value == doctest::Approx(a.critical->s_value).epsilon(1e-10));
  CHECK(b.slope_m == doctest::Approx(1.0 / a.slope_m).epsilon(1e-8));
}

TEST_CASE("driftless four-step model") {
  const SlopeInfo info = optimal_slope(StepSet::parse("(1,0);(0,1);(-1,0);(0,-1)"));
  REQUIRE(info.critical.has_value());
  CHECK(info.critical->alpha == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(info.critical->beta == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(info.rho_inv == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(info.kind == SlopeKind::rational);
  CHECK(info.p == 1);
  CHECK(info.q == 1);
  // Not reluctant, so no subexponential exponent is predicted.
  CHECK_FALSE(info.r_variant_a.has_value());
  CHECK_THROWS_AS(exponent_r(StepSet::parse("(1,0);(0,1);(-1,0);(0,-1)"), ExponentVariant::A),
                  Error);
}

TEST_CASE("singular model falls back to the horizontal half-plane") {
  const StepSet s = StepSet::parse("(0,1);(1,1)");
  CHECK_FALSE(critical_point(s).has_value());
  const SlopeInfo info = optimal_slope(s);
  CHECK(info.kind == SlopeKind::boundary);
  CHECK(info.p == 0);
  CHECK(info.q == 1);
  CHECK(info.slope_m == 0.0);
  CHECK(std::isnan(info.rho_inv));
}

TEST_CASE("beta = 1 boundary gives the vertical half-plane") {
  // Symmetric in y, tilted in x: the critical point has beta exactly 1.
  const SlopeInfo info = optimal_slope(StepSet::parse("(1,0);(-2,0);(0,1);(0,-1)"));
  REQUIRE(info.critical.has_value());
  CHECK(info.critical->alpha == doctest::Approx(std::cbrt(2.0)).epsilon(1e-9));
  CHECK(info.critical->beta == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(info.kind == SlopeKind::boundary);
  CHECK(info.p == 1);
  CHECK(info.q == 0);
  CHECK(std::isinf(info.slope_m));
}

TEST_CASE("negative log-ratio clamps to the boundary slope 0") {
  // Strong positive x-drift, negative y-drift: alpha < 1 < beta.
  const SlopeInfo info =
      optimal_slope(StepSet::parse("(1,0);(1,0);(-1,0);(0,1);(0,-1);(0,-1)"));
  REQUIRE(info.critical.has_value());
  CHECK(info.critical->alpha < 1.0);
  CHECK(info.critical->beta > 1.0);
  CHECK(info.kind == SlopeKind::boundary);
  CHECK(info.p == 0);
  CHECK(info.q == 1);
  CHECK(info.slope_m == 0.0);
}

TEST_CASE("exponent variants straddle the empirical exponent") {
  const StepSet s = StepSet::parse(kFig);
  const double ra = exponent_r(s, ExponentVariant::A);
  const double rb = exponent_r(s, ExponentVariant::B);
  // c > 0 here, so acos(-c) < acos(c) and variant A is the larger divisor:
  CHECK(ra < rb);
  // Both live inside the plausible band reported for this model.
  CHECK(ra > 1.5);
  CHECK(rb < 7.5);
}
