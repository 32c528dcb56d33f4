#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qwalk {

struct Step {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Step&, const Step&) = default;
};

// Ordered multiset of lattice steps. Order is the parse order and duplicates
// keep distinct identities: counts and samplers weight a twice-listed step
// twice, because walks are step *sequences*, not position sequences.
class StepSet {
 public:
  static constexpr int kDefaultCoordBound = 10;

  // Accepts semicolon-separated "dx,dy" pairs, each optionally parenthesized,
  // with arbitrary whitespace: "(1,0);(0,1)" or " 1,0 ; 0,1 ".
  static StepSet parse(std::string_view text, int coord_bound = kDefaultCoordBound);

  explicit StepSet(std::vector<Step> steps, int coord_bound = kDefaultCoordBound);

  const std::vector<Step>& steps() const { return steps_; }
  int size() const { return static_cast<int>(steps_.size()); }
  const Step& operator[](int i) const { return steps_[static_cast<std::size_t>(i)]; }

  // Canonical form "(dx,dy);(dx,dy);..." with no spaces; parse(format()) == *this.
  std::string format() const;

  StepSet transposed() const;  // (dx,dy) -> (dy,dx)
  bool is_transpose_symmetric() const;

  std::pair<long long, long long> drift() const;

  // Largest step magnitudes per direction; all are >= 0.
  int max_dx_up() const { return max_dx_up_; }      // max dx over steps, clamped at 0
  int max_dy_up() const { return max_dy_up_; }
  int max_dx_down() const { return max_dx_down_; }  // max -dx over steps, clamped at 0
  int max_dy_down() const { return max_dy_down_; }

  friend bool operator==(const StepSet& a, const StepSet& b) { return a.steps_ == b.steps_; }

 private:
  std::vector<Step> steps_;
  int max_dx_up_ = 0, max_dy_up_ = 0, max_dx_down_ = 0, max_dy_down_ = 0;
};

// Inventory polynomial S(x,y) = sum of x^dx * y^dy over the multiset, with
// first and second partial derivatives, all evaluated exactly at (x,y).
struct InventoryEval {
  double value = 0;
  double gx = 0, gy = 0;
  double gxx = 0, gxy = 0, gyy = 0;
};

// Requires x > 0 and y > 0 (steps may have negative exponents).
InventoryEval inventory_eval(const StepSet& s, double x, double y);

struct Classification {
  std::pair<long long, long long> drift{0, 0};
  bool reluctant = false;  // both drift components strictly negative
  bool singular = false;   // inventory has no positive critical point
  bool trivial = false;    // quadrant counts hit zero at some n <= horizon
};

// `horizon` bounds the triviality scan; once q_n = 0 every longer count is
// zero too (prefixes of walks are walks), so a bounded scan is sound.
Classification classify(const StepSet& s, int horizon = 50);

}  // namespace qwalk
