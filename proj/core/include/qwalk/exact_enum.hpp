#pragma once

#include <gmp.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "qwalk/bigint.hpp"
#include "qwalk/rng.hpp"
#include "qwalk/step_set.hpp"

namespace qwalk {

enum class Endpoint { any, origin, diagonal };

// Exact count sequence q_0..q_N for one endpoint constraint (also reused for
// one-dimensional half-line counts, where `origin` means "final height 0").
struct CountSeries {
  Endpoint endpoint = Endpoint::any;
  std::vector<BigInt> values;
  int n_max() const { return static_cast<int>(values.size()) - 1; }
};

// A walk is a sequence of indices into a step multiset. The step set is
// referenced, not owned: it must outlive the walk.
class Walk {
 public:
  Walk() = default;
  Walk(const StepSet* set, std::vector<int> step_indices)
      : set_(set), idx_(std::move(step_indices)) {}

  int length() const { return static_cast<int>(idx_.size()); }
  const std::vector<int>& step_indices() const { return idx_; }
  const StepSet& step_set() const { return *set_; }

  // Lattice points visited, starting at (0,0); size = length + 1.
  std::vector<std::pair<long long, long long>> positions() const;

  friend bool operator==(const Walk& a, const Walk& b) { return a.idx_ == b.idx_; }

 private:
  const StepSet* set_ = nullptr;
  std::vector<int> idx_;
};

// Confinement region for the brute-force oracle.
struct Region {
  enum class Kind { quadrant, halfplane };
  Kind kind = Kind::quadrant;
  long long p = 0, q = 1;  // halfplane: require p*x + q*y >= 0 at every position
  static Region quadrant() { return {Kind::quadrant, 0, 1}; }
  static Region halfplane(long long p, long long q) { return {Kind::halfplane, p, q}; }
};

// Layered table of suffix counts g[n_rem](x,y) = number of length-n_rem
// quadrant walks starting at (x,y). Layer n_rem stores x in
// [0, min((n-n_rem)*a_up, n_rem*cx)] and y likewise: positions beyond the
// first bound are unreachable from the origin in n-n_rem steps, and beyond
// the second the count no longer depends on the coordinate (the wall is out
// of reach), so lookups clamp. Cells live in a per-layer limb arena; big
// counts are never boxed individually.
class CountTable {
 public:
  struct Layer {
    long long wx = 1, wy = 1;                 // stored widths
    std::vector<mp_limb_t> limbs;             // cell arena
    std::vector<std::uint64_t> off;           // per-cell limb offset (wx*wy entries)
    std::vector<std::uint32_t> sz;            // per-cell limb count, 0 = value 0
    std::size_t bytes() const;
  };

  CountTable(StepSet set, std::vector<Layer> layers);

  const StepSet& step_set() const { return set_; }
  int n() const { return static_cast<int>(layers_.size()) - 1; }
  const Layer& layer(int n_rem) const { return layers_[static_cast<std::size_t>(n_rem)]; }

  BigInt q_n() const { return suffix_count(n(), 0, 0); }
  // Clamped suffix-count lookup; (x,y) must be a quadrant position.
  BigInt suffix_count(int n_rem, long long x, long long y) const;

  std::size_t memory_bytes() const;

 private:
  StepSet set_;
  std::vector<Layer> layers_;
};

inline constexpr std::size_t kDefaultMemoryBudget = 2'000'000'000;  // bytes

// Full sampling table (Theta(n^3) stored numbers). Throws errc::resource as
// soon as cumulative allocation would exceed the budget.
CountTable suffix_counts(const StepSet& s, int n, std::size_t memory_budget = kDefaultMemoryBudget);

// Coarse a-priori size estimate for method auto-selection.
std::size_t estimate_table_bytes(const StepSet& s, int n);

// Exact count series with two rolling layers (Theta(n^2) numbers, no sampling).
CountSeries quadrant_counts(const StepSet& s, int n_max, Endpoint endpoint = Endpoint::any);

// Exhaustive enumeration oracle, lexicographic by step indices. Guarded: the
// cost is |S|^n, so n > 12 is refused.
std::vector<Walk> brute_force_walks(const StepSet& s, int n, Region region = Region::quadrant());

// Exact uniform sampling over quadrant walks of length table.n(): each step is
// drawn with probability g[n'-1](next) / g[n'](here), so the probability of
// any fixed walk telescopes to exactly 1/q_n. When chosen_probability is
// given, it receives the exact product of the per-step ratios actually used.
Walk sample_recursive(const CountTable& table, Rng& rng,
                      BigRat* chosen_probability = nullptr);

// q_N / q_{N-1} at the largest N, as a growth-factor estimate. Requires the
// last 10 terms to be nonzero.
double estimate_growth(const CountSeries& series);

// Least-squares fit of log(q_n) - n*log(rho_inv) against log n over
// [n_lo, n_hi]; returns the negated slope, i.e. the subexponential exponent r
// in q_n ~ C * rho_inv^n * n^-r.
double fit_subexp_exponent(const CountSeries& series, double rho_inv, int n_lo, int n_hi);

}  // namespace qwalk
