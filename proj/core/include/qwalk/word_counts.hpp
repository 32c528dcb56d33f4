#pragma once

#include <memory>
#include <vector>

#include "qwalk/bigint.hpp"
#include "qwalk/grammar.hpp"
#include "qwalk/online_product.hpp"

namespace qwalk {

// How per-length coefficients are accumulated. naive is the direct Cauchy
// convolution; blocked batches the bulk of each convolution into Kronecker-
// packed big multiplications while staying exact and online (needed to make
// lengths in the tens of thousands affordable). automatic switches on size.
enum class CountMode { automatic, naive, blocked };

// automatic switches to blocked at this length; below it the direct
// convolution is cheap enough that tiling overhead is not worth paying.
inline constexpr long long kBlockedThreshold = 2048;

// Reference to a counting unit: a weight-class leaf, a nonterminal, or an
// internal binary product node. eps only appears in per-alternative refs.
struct UnitRef {
  enum class Kind { eps, leaf, nt, node };
  Kind kind = Kind::eps;
  int index = 0;
  friend bool operator==(const UnitRef&, const UnitRef&) = default;
};

// Binarized product of two unit series; shared across alternatives that
// reduce to the same (left, right) pair.
struct ProdNode {
  UnitRef left, right;
  bool nullable = false;
  std::vector<BigInt> coeffs;
  std::unique_ptr<OnlineProduct> relaxed;  // only in blocked mode
};

// Exact per-length word counts for every nonterminal of a grammar, plus the
// per-alternative breakdown the sampler walks. Counting is sound only for
// unambiguous grammars (one parse per word), which Grammar::build guarantees.
class WordCounts {
 public:
  static WordCounts compute(const Grammar& g, long long n_max,
                            CountMode mode = CountMode::automatic);

  const Grammar& grammar() const { return g_; }
  long long n_max() const { return n_max_; }

  // Number of words of exactly this length generated by the nonterminal.
  const BigInt& count(int nt_index, long long len) const;

  // Count contributed by one alternative of a nonterminal at one length.
  const BigInt& alt_count(int nt_index, int alt_index, long long len) const;

  // Series value of an arbitrary unit (used by the sampler's split scans).
  const BigInt& unit_count(const UnitRef& ref, long long len) const;

  const std::vector<ProdNode>& nodes() const { return nodes_; }
  const std::vector<std::vector<UnitRef>>& alt_refs() const { return alt_refs_; }

  // Binarization spine of each alternative: alt_spines()[nt][alt][k] is the
  // node covering the first k+2 symbols; empty for eps/one-symbol
  // alternatives. The sampler walks these to split lengths.
  const std::vector<std::vector<std::vector<int>>>& alt_spines() const {
    return alt_spines_;
  }

  // Counting unit a grammar symbol contributes as (terminals collapse to
  // their weight-class leaf; weight classes have identical series).
  UnitRef symbol_ref(const Symbol& s) const;

  // Rough footprint of all stored coefficients, for resource accounting.
  size_t memory_bytes() const;

 private:
  Grammar g_;
  long long n_max_ = 0;
  std::vector<long long> class_weights_;          // leaf id -> weight
  std::vector<int> term_class_;                   // terminal id -> leaf id
  std::vector<std::vector<BigInt>> leaf_coeffs_;  // [leaf][len], z^1 each
  std::vector<ProdNode> nodes_;
  std::vector<std::vector<UnitRef>> alt_refs_;    // [nt][alt]
  std::vector<std::vector<std::vector<int>>> alt_spines_;
  std::vector<std::vector<BigInt>> nt_coeffs_;    // [nt][len]

  friend class WordCountsBuilder;
};

// Total word counts via the grammar, start symbol P.
std::vector<BigInt> count_words(const Grammar& g, long long n_max,
                                CountMode mode = CountMode::automatic);

// Independent oracle: direct height DP over the projected model. final_zero
// counts weight-0 words (matching nonterminal D), otherwise any final height
// (matching P).
std::vector<BigInt> oned_counts(const OneDModel& m, long long n_max, bool final_zero);

}  // namespace qwalk
