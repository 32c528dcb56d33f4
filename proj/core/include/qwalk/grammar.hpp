#pragma once

#include <string>
#include <vector>

#include "qwalk/projection.hpp"

namespace qwalk {

// Grammar symbols reference either a projected terminal (by OneDTerminal id)
// or a nonterminal (by index into Grammar::nonterminals()).
struct Symbol {
  enum class Kind { terminal, nonterminal };
  Kind kind = Kind::terminal;
  int index = 0;

  static Symbol term(int id) { return Symbol{Kind::terminal, id}; }
  static Symbol nt(int idx) { return Symbol{Kind::nonterminal, idx}; }
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

// One production alternative; an empty symbol list is the epsilon word.
struct Alternative {
  std::vector<Symbol> symbols;
};

struct Nonterminal {
  std::string name;
  long long weight = 0;     // fixed total weight of every generated word
  bool weight_fixed = true; // false for the start pieces (any final height)
  std::vector<Alternative> alts;
};

// Unambiguous context-free grammar for the language of weighted words whose
// prefix sums all stay >= 0 (the half-plane model after projection).
//
// Nonterminals, with a_bar/b_bar the extreme up/down jumps:
//   P    : all nonnegative-prefix words              = D Paux
//   Paux : P restricted to "never returns to 0 after leaving" suffix chain
//        = eps | L_k D Paux                      (k = 1..a_bar)
//   D    : weight-0 words, prefixes >= 0 ("arches" sequence)
//        = eps | z D | L_k D R_k D               (z each zero-weight terminal,
//                                                 k = 1..min(a_bar, b_bar))
//   L_i  : weight +i words, every proper nonempty prefix weight >= 1
//        = t(+i) | L_k D R_{k-i}                 (k = i+1..min(a_bar, i+b_bar))
//   R_j  : weight -j words, every proper prefix weight >= ... mirrored descent
//        = t(-j) | L_{k-j} D R_k                 (k = j+1..min(j+a_bar, b_bar))
//
// The decomposition is by first passage through intermediate heights; every
// word has exactly one parse, which is what makes coefficient counting equal
// word counting.
class Grammar {
 public:
  static Grammar build(const OneDModel& m);

  const OneDModel& model() const { return model_; }
  const std::vector<Nonterminal>& nonterminals() const { return nts_; }
  int start() const { return 0; }     // P
  int dyck() const { return 2; }      // D (weight-0 words)
  int nt_l(long long i) const;        // L_i, 1 <= i <= a_bar
  int nt_r(long long j) const;        // R_j, 1 <= j <= b_bar

  // Human-readable listing: terminal legend then one rule per line.
  std::string to_text() const;

  // Structural checks: symbol indices resolve, fixed-weight rules are weight
  // consistent, every nonterminal is productive and reachable. Returns one
  // message per problem; empty means sound.
  std::vector<std::string> validate() const;

  // Deliberate mutation hook used by self-test fault injection.
  Nonterminal& mutable_nonterminal(int idx);

 private:
  OneDModel model_;
  std::vector<Nonterminal> nts_;
};

}  // namespace qwalk
