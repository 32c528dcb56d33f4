#include "qwalk/word_sampler.hpp"

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

struct WorkItem {
  enum class Kind { expand_nt, expand_spine, emit };
  Kind kind;
  int nt = 0;        // expand_nt / expand_spine
  int alt = 0;       // expand_spine
  int prefix = 0;    // expand_spine: symbols [0, prefix) remain to cover
  int terminal = 0;  // emit
  long long len = 0;
};

}  // namespace

bool sample_word(const WordCounts& counts, int nt_index, long long n, Rng& rng,
                 const std::function<bool(int)>& sink) {
  if (n < 0 || n > counts.n_max())
    fail(errc::argument, "word length outside computed count range");
  if (mpz_sgn(counts.count(nt_index, n).get_mpz_t()) == 0)
    fail(errc::no_sample, "no word of length " + std::to_string(n) +
                              " for rule " +
                              counts.grammar().nonterminals()[static_cast<size_t>(nt_index)].name);

  const auto& nts = counts.grammar().nonterminals();
  std::vector<WorkItem> stack;
  stack.push_back({WorkItem::Kind::expand_nt, nt_index, 0, 0, 0, n});

  BigInt u, cum, prod;
  while (!stack.empty()) {
    WorkItem it = stack.back();
    stack.pop_back();

    if (it.kind == WorkItem::Kind::emit) {
      if (!sink(it.terminal)) return false;
      continue;
    }

    if (it.kind == WorkItem::Kind::expand_nt) {
      const auto& alts = nts[static_cast<size_t>(it.nt)].alts;
      const BigInt& total = counts.count(it.nt, it.len);
      if (mpz_sgn(total.get_mpz_t()) == 0)
        fail(errc::numeric, "count bookkeeping hit an empty rule mid-derivation");
      u = uniform_below(total, rng);
      int chosen = -1;
      for (int a = 0; a < static_cast<int>(alts.size()); ++a) {
        const BigInt& c = counts.alt_count(it.nt, a, it.len);
        if (u < c) {
          chosen = a;
          break;
        }
        u -= c;
      }
      if (chosen < 0)
        fail(errc::numeric, "alternative counts do not add up to the rule count");
      const auto& syms = alts[static_cast<size_t>(chosen)].symbols;
      if (syms.empty()) continue;  // epsilon: it.len == 0 by construction
      stack.push_back({WorkItem::Kind::expand_spine, it.nt, chosen,
                       static_cast<int>(syms.size()), 0, it.len});
      continue;
    }

    // expand_spine: distribute it.len over the first it.prefix symbols of the
    // chosen alternative, peeling the last symbol off each round.
    const auto& syms = nts[static_cast<size_t>(it.nt)].alts[static_cast<size_t>(it.alt)].symbols;
    if (it.prefix == 1) {
      const Symbol& s = syms[0];
      if (s.kind == Symbol::Kind::terminal) {
        if (it.len != 1) fail(errc::numeric, "terminal asked to cover length != 1");
        if (!sink(s.index)) return false;
      } else {
        stack.push_back({WorkItem::Kind::expand_nt, s.index, 0, 0, 0, it.len});
      }
      continue;
    }

    const auto& spine = counts.alt_spines()[static_cast<size_t>(it.nt)][static_cast<size_t>(it.alt)];
    const int node_id = spine[static_cast<size_t>(it.prefix - 2)];
    const UnitRef left = it.prefix == 2
                             ? counts.symbol_ref(syms[0])
                             : UnitRef{UnitRef::Kind::node,
                                       spine[static_cast<size_t>(it.prefix - 3)]};
    const UnitRef right = counts.symbol_ref(syms[static_cast<size_t>(it.prefix - 1)]);

    const BigInt& total = counts.unit_count(UnitRef{UnitRef::Kind::node, node_id}, it.len);
    if (mpz_sgn(total.get_mpz_t()) == 0)
      fail(errc::numeric, "count bookkeeping hit an empty product mid-derivation");
    u = uniform_below(total, rng);
    cum = 0;
    long long split = -1;
    for (long long m = 0; m <= it.len; ++m) {
      const BigInt& x = counts.unit_count(left, m);
      if (mpz_sgn(x.get_mpz_t()) == 0) continue;
      const BigInt& y = counts.unit_count(right, it.len - m);
      if (mpz_sgn(y.get_mpz_t()) == 0) continue;
      mpz_mul(prod.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      cum += prod;
      if (u < cum) {
        split = m;
        break;
      }
    }
    if (split < 0)
      fail(errc::numeric, "product counts do not add up to the node count");

    // Left part first in emission order, so push the right part first.
    const Symbol& last = syms[static_cast<size_t>(it.prefix - 1)];
    if (last.kind == Symbol::Kind::terminal) {
      if (it.len - split != 1) fail(errc::numeric, "terminal asked to cover length != 1");
      stack.push_back({WorkItem::Kind::emit, 0, 0, 0, last.index, 0});
    } else {
      stack.push_back({WorkItem::Kind::expand_nt, last.index, 0, 0, 0, it.len - split});
    }
    stack.push_back({WorkItem::Kind::expand_spine, it.nt, it.alt, it.prefix - 1, 0, split});
  }
  return true;
}

std::vector<int> sample_word(const WordCounts& counts, int nt_index, long long n,
                             Rng& rng) {
  std::vector<int> out;
  out.reserve(static_cast<size_t>(n));
  sample_word(counts, nt_index, n, rng, [&](int t) {
    out.push_back(t);
    return true;
  });
  return out;
}

}  // namespace qwalk
