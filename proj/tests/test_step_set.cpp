#include <cmath>
#include <set>

#include "doctest.h"
#include "qwalk/errors.hpp"
#include "qwalk/step_set.hpp"

using namespace qwalk;

namespace {
const char* kFig = "(1,0);(0,1);(-1,0);(1,-1);(-1,-1);(-2,-1)";
}

TEST_CASE("parse/format round-trip") {
  const StepSet s = StepSet::parse(kFig);
  CHECK(s.size() == 6);
  CHECK(s.format() == kFig);
  CHECK(StepSet::parse(s.format()) == s);
  // Whitespace and missing parens are tolerated on input.
  CHECK(StepSet::parse(" (1, 0) ; (0,1) ") == StepSet::parse("1,0;0,1"));
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(StepSet::parse(""), Error);
  CHECK_THROWS_AS(StepSet::parse("(1,)"), Error);
  CHECK_THROWS_AS(StepSet::parse("(1,2,3)"), Error);
  CHECK_THROWS_AS(StepSet::parse("(99,0)"), Error);   // outside coordinate bound
  CHECK_THROWS_AS(StepSet::parse("(a,b)"), Error);
}

TEST_CASE("multisets keep duplicates") {
  const StepSet s = StepSet::parse("(1,0);(1,0);(-1,0)");
  CHECK(s.size() == 3);
  CHECK(s[0] == s[1]);
}

TEST_CASE("the pause step (0,0) is permitted") {
  const StepSet s = StepSet::parse("(1,0);(0,0);(-1,0)");
  CHECK(s.size() == 3);
  CHECK(s.drift() == std::pair<long long, long long>(0, 0));
  CHECK(s.max_dx_up() == 1);
  CHECK(s.max_dx_down() == 1);
}

TEST_CASE("drift and envelope accessors") {
  const StepSet s = StepSet::parse(kFig);
  CHECK(s.drift() == std::pair<long long, long long>(-2, -2));
  CHECK(s.max_dx_up() == 1);
  CHECK(s.max_dy_up() == 1);
  CHECK(s.max_dx_down() == 2);
  CHECK(s.max_dy_down() == 1);
  const StepSet up = StepSet::parse("(1,0);(0,1)");
  CHECK(up.max_dx_down() == 0);  // no negative movement at all
  CHECK(up.max_dy_down() == 0);
}

TEST_CASE("transpose") {
  const StepSet s = StepSet::parse(kFig);
  const StepSet t = s.transposed();
  CHECK(t.format() == "(0,1);(1,0);(0,-1);(-1,1);(-1,-1);(-1,-2)");
  CHECK_FALSE(s.is_transpose_symmetric());
  CHECK(StepSet::parse("(1,1);(-1,0);(0,-1);(-1,-1)").is_transpose_symmetric());
  CHECK(StepSet::parse("(1,0);(0,1);(-1,0);(0,-1)").is_transpose_symmetric());
}

TEST_CASE("inventory evaluation matches finite differences") {
  const StepSet s = StepSet::parse(kFig);
  const double x = 1.17, y = 0.83, h = 1e-6;
  const InventoryEval e = inventory_eval(s, x, y);
  double direct = 0;
  for (const Step& st : s.steps()) direct += std::pow(x, st.dx) * std::pow(y, st.dy);
  CHECK(e.value == doctest::Approx(direct).epsilon(1e-12));
  const double gx_fd =
      (inventory_eval(s, x + h, y).value - inventory_eval(s, x - h, y).value) / (2 * h);
  const double gy_fd =
      (inventory_eval(s, x, y + h).value - inventory_eval(s, x, y - h).value) / (2 * h);
  CHECK(e.gx == doctest::Approx(gx_fd).epsilon(1e-5));
  CHECK(e.gy == doctest::Approx(gy_fd).epsilon(1e-5));
  const double gxx_fd = (inventory_eval(s, x + h, y).gx - inventory_eval(s, x - h, y).gx) / (2 * h);
  const double gxy_fd = (inventory_eval(s, x, y + h).gx - inventory_eval(s, x, y - h).gx) / (2 * h);
  const double gyy_fd = (inventory_eval(s, x, y + h).gy - inventory_eval(s, x, y - h).gy) / (2 * h);
  CHECK(e.gxx == doctest::Approx(gxx_fd).epsilon(1e-5));
  CHECK(e.gxy == doctest::Approx(gxy_fd).epsilon(1e-5));
  CHECK(e.gyy == doctest::Approx(gyy_fd).epsilon(1e-5));
}

TEST_CASE("classification") {
  const Classification fig = classify(StepSet::parse(kFig));
  CHECK(fig.drift == std::pair<long long, long long>(-2, -2));
  CHECK(fig.reluctant);
  CHECK_FALSE(fig.singular);
  CHECK_FALSE(fig.trivial);

  const Classification nesw = classify(StepSet::parse("(1,0);(0,1);(-1,0);(0,-1)"));
  CHECK(nesw.drift == std::pair<long long, long long>(0, 0));
  CHECK_FALSE(nesw.reluctant);
  CHECK_FALSE(nesw.trivial);

  // Nothing ever moves up or right: no walk of length 1 stays in the quadrant.
  const Classification dead = classify(StepSet::parse("(-1,0);(0,-1)"));
  CHECK(dead.trivial);

  // Only strictly-up moves: every walk stays, but the model is singular
  // (no interior critical point since the inventory decreases toward 0).
  const Classification up = classify(StepSet::parse("(0,1);(1,1)"));
  CHECK_FALSE(up.trivial);
  CHECK(up.singular);
}
