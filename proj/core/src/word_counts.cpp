#include "qwalk/word_counts.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "qwalk/errors.hpp"
#include "qwalk/online_product.hpp"

namespace qwalk {

namespace {

const BigInt kZero = 0;
const BigInt kOne = 1;

int unit_id(const UnitRef& r, int n_nodes) {
  // Dense id for the topological sort: nodes first, then nonterminals.
  return r.kind == UnitRef::Kind::node ? r.index : n_nodes + r.index;
}

}  // namespace

UnitRef WordCounts::symbol_ref(const Symbol& s) const {
  if (s.kind == Symbol::Kind::terminal)
    return UnitRef{UnitRef::Kind::leaf, term_class_[static_cast<size_t>(s.index)]};
  return UnitRef{UnitRef::Kind::nt, s.index};
}

const BigInt& WordCounts::unit_count(const UnitRef& ref, long long len) const {
  if (len < 0 || len > n_max_) return kZero;
  const size_t l = static_cast<size_t>(len);
  switch (ref.kind) {
    case UnitRef::Kind::leaf: return leaf_coeffs_[static_cast<size_t>(ref.index)][l];
    case UnitRef::Kind::nt: return nt_coeffs_[static_cast<size_t>(ref.index)][l];
    case UnitRef::Kind::node: return nodes_[static_cast<size_t>(ref.index)].coeffs[l];
    case UnitRef::Kind::eps: return len == 0 ? kOne : kZero;
  }
  return kZero;
}

const BigInt& WordCounts::count(int nt_index, long long len) const {
  if (nt_index < 0 || nt_index >= static_cast<int>(nt_coeffs_.size()))
    fail(errc::argument, "nonterminal index out of range");
  if (len < 0 || len > n_max_) fail(errc::argument, "length outside computed range");
  return nt_coeffs_[static_cast<size_t>(nt_index)][static_cast<size_t>(len)];
}

const BigInt& WordCounts::alt_count(int nt_index, int alt_index, long long len) const {
  if (nt_index < 0 || nt_index >= static_cast<int>(alt_refs_.size()))
    fail(errc::argument, "nonterminal index out of range");
  const auto& alts = alt_refs_[static_cast<size_t>(nt_index)];
  if (alt_index < 0 || alt_index >= static_cast<int>(alts.size()))
    fail(errc::argument, "alternative index out of range");
  return unit_count(alts[static_cast<size_t>(alt_index)], len);
}

size_t WordCounts::memory_bytes() const {
  size_t total = 0;
  auto vec_bytes = [](const std::vector<BigInt>& v) {
    size_t b = v.size() * sizeof(BigInt);
    for (const auto& x : v) b += mpz_size(x.get_mpz_t()) * sizeof(mp_limb_t);
    return b;
  };
  for (const auto& v : leaf_coeffs_) total += vec_bytes(v);
  for (const auto& v : nt_coeffs_) total += vec_bytes(v);
  for (const auto& nd : nodes_) {
    total += vec_bytes(nd.coeffs);
    if (nd.relaxed) total += nd.relaxed->pending_bytes();
  }
  return total;
}

WordCounts WordCounts::compute(const Grammar& g, long long n_max, CountMode mode) {
  if (n_max < 0) fail(errc::argument, "count length must be nonnegative");
  {
    auto issues = g.validate();
    if (!issues.empty())
      fail(errc::validation, "grammar failed validation: " + issues.front());
  }
  const bool blocked =
      mode == CountMode::blocked ||
      (mode == CountMode::automatic && n_max >= kBlockedThreshold);

  WordCounts wc;
  wc.g_ = g;
  wc.n_max_ = n_max;
  const auto& model = wc.g_.model();
  const auto& nts = wc.g_.nonterminals();
  const int n_nts = static_cast<int>(nts.size());
  const size_t len = static_cast<size_t>(n_max) + 1;

  // Weight classes: one leaf per distinct terminal weight.
  std::vector<long long> weights;
  for (const auto& t : model.terminals) weights.push_back(t.weight);
  std::sort(weights.begin(), weights.end());
  weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
  wc.class_weights_ = weights;
  wc.term_class_.resize(model.terminals.size());
  for (const auto& t : model.terminals)
    wc.term_class_[static_cast<size_t>(t.id)] = static_cast<int>(
        std::lower_bound(weights.begin(), weights.end(), t.weight) - weights.begin());
  wc.leaf_coeffs_.assign(weights.size(), std::vector<BigInt>(len));
  if (n_max >= 1)
    for (auto& v : wc.leaf_coeffs_) v[1] = 1;

  // Binarize alternatives into shared product nodes.
  std::map<std::tuple<int, int, int, int>, int> node_ids;
  auto get_node = [&](const UnitRef& l, const UnitRef& r) {
    auto key = std::make_tuple(static_cast<int>(l.kind), l.index,
                               static_cast<int>(r.kind), r.index);
    auto it = node_ids.find(key);
    if (it != node_ids.end()) return it->second;
    const int id = static_cast<int>(wc.nodes_.size());
    node_ids.emplace(key, id);
    ProdNode nd;
    nd.left = l;
    nd.right = r;
    wc.nodes_.push_back(std::move(nd));
    return id;
  };
  wc.alt_refs_.resize(static_cast<size_t>(n_nts));
  wc.alt_spines_.resize(static_cast<size_t>(n_nts));
  for (int v = 0; v < n_nts; ++v) {
    const auto& alts = nts[static_cast<size_t>(v)].alts;
    for (const auto& alt : alts) {
      std::vector<int> spine;
      UnitRef cur{UnitRef::Kind::eps, 0};
      if (!alt.symbols.empty()) {
        cur = wc.symbol_ref(alt.symbols[0]);
        for (size_t k = 1; k < alt.symbols.size(); ++k) {
          const int id = get_node(cur, wc.symbol_ref(alt.symbols[k]));
          spine.push_back(id);
          cur = UnitRef{UnitRef::Kind::node, id};
        }
      }
      wc.alt_refs_[static_cast<size_t>(v)].push_back(cur);
      wc.alt_spines_[static_cast<size_t>(v)].push_back(std::move(spine));
    }
  }
  const int n_nodes = static_cast<int>(wc.nodes_.size());

  // Nullability fixpoint (leaves never, eps always).
  std::vector<char> nt_null(static_cast<size_t>(n_nts), 0);
  auto ref_null = [&](const UnitRef& r) -> bool {
    switch (r.kind) {
      case UnitRef::Kind::eps: return true;
      case UnitRef::Kind::leaf: return false;
      case UnitRef::Kind::nt: return nt_null[static_cast<size_t>(r.index)];
      case UnitRef::Kind::node: return wc.nodes_[static_cast<size_t>(r.index)].nullable;
    }
    return false;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& nd : wc.nodes_)
      if (!nd.nullable && ref_null(nd.left) && ref_null(nd.right)) {
        nd.nullable = true;
        changed = true;
      }
    for (int v = 0; v < n_nts; ++v) {
      if (nt_null[static_cast<size_t>(v)]) continue;
      for (const auto& r : wc.alt_refs_[static_cast<size_t>(v)])
        if (ref_null(r)) {
          nt_null[static_cast<size_t>(v)] = 1;
          changed = true;
          break;
        }
    }
  }

  // Per-length evaluation order: a unit must come after anything it reads at
  // the same length. A product reads a child at the current length only when
  // the other child is nullable; a nonterminal always reads its alternatives.
  const int n_units = n_nodes + n_nts;
  std::vector<std::vector<int>> adj(static_cast<size_t>(n_units));
  std::vector<int> indeg(static_cast<size_t>(n_units), 0);
  auto add_edge = [&](int from, int to) {
    adj[static_cast<size_t>(from)].push_back(to);
    ++indeg[static_cast<size_t>(to)];
  };
  auto maybe_edge_child = [&](const UnitRef& child, int to) {
    if (child.kind == UnitRef::Kind::nt || child.kind == UnitRef::Kind::node)
      add_edge(unit_id(child, n_nodes), to);
  };
  for (int i = 0; i < n_nodes; ++i) {
    const auto& nd = wc.nodes_[static_cast<size_t>(i)];
    if (ref_null(nd.right)) maybe_edge_child(nd.left, i);
    if (ref_null(nd.left)) maybe_edge_child(nd.right, i);
  }
  for (int v = 0; v < n_nts; ++v)
    for (const auto& r : wc.alt_refs_[static_cast<size_t>(v)])
      maybe_edge_child(r, n_nodes + v);
  std::vector<int> order;
  order.reserve(static_cast<size_t>(n_units));
  {
    std::vector<int> queue;
    for (int u = 0; u < n_units; ++u)
      if (indeg[static_cast<size_t>(u)] == 0) queue.push_back(u);
    while (!queue.empty()) {
      const int u = queue.back();
      queue.pop_back();
      order.push_back(u);
      for (int w : adj[static_cast<size_t>(u)])
        if (--indeg[static_cast<size_t>(w)] == 0) queue.push_back(w);
    }
    if (static_cast<int>(order.size()) != n_units)
      fail(errc::validation,
           "grammar counting dependencies are cyclic (nullable left recursion)");
  }

  // Coefficient storage, then the relaxed-product engines pointing into it.
  // Vectors are sized once here and never reallocated, so the stream pointers
  // handed to OnlineProduct stay valid even when the result object is moved
  // (moving a vector leaves its elements in place).
  for (auto& nd : wc.nodes_) nd.coeffs.resize(len);
  wc.nt_coeffs_.assign(static_cast<size_t>(n_nts), std::vector<BigInt>(len));
  auto series_of = [&](const UnitRef& r) -> const std::vector<BigInt>* {
    switch (r.kind) {
      case UnitRef::Kind::leaf: return &wc.leaf_coeffs_[static_cast<size_t>(r.index)];
      case UnitRef::Kind::nt: return &wc.nt_coeffs_[static_cast<size_t>(r.index)];
      case UnitRef::Kind::node: return &wc.nodes_[static_cast<size_t>(r.index)].coeffs;
      case UnitRef::Kind::eps: return nullptr;
    }
    return nullptr;
  };
  if (blocked)
    for (auto& nd : wc.nodes_)
      nd.relaxed = std::make_unique<OnlineProduct>(series_of(nd.left),
                                                   series_of(nd.right), n_max);

  // First nonzero index per unit, maintained on the fly to skip dead ranges
  // in the direct convolutions.
  std::vector<long long> lead(static_cast<size_t>(n_units), -1);
  auto lead_of = [&](const UnitRef& r) -> long long {
    if (r.kind == UnitRef::Kind::leaf) return 1;
    return lead[static_cast<size_t>(unit_id(r, n_nodes))];
  };

  BigInt acc;
  for (long long l = 0; l <= n_max; ++l) {
    const size_t sl = static_cast<size_t>(l);
    for (int u : order) {
      if (u < n_nodes) {
        auto& nd = wc.nodes_[static_cast<size_t>(u)];
        if (nd.relaxed) {
          nd.coeffs[sl] = nd.relaxed->advance(l);
        } else {
          acc = 0;
          const auto* ls = series_of(nd.left);
          const auto* rs = series_of(nd.right);
          const long long ll = lead_of(nd.left), rl = lead_of(nd.right);
          if (ll >= 0 && rl >= 0) {
            for (long long m = ll; m <= l - rl; ++m) {
              const auto& x = (*ls)[static_cast<size_t>(m)];
              if (mpz_sgn(x.get_mpz_t()) == 0) continue;
              const auto& y = (*rs)[static_cast<size_t>(l - m)];
              if (mpz_sgn(y.get_mpz_t()) == 0) continue;
              mpz_addmul(acc.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
            }
          }
          mpz_swap(nd.coeffs[sl].get_mpz_t(), acc.get_mpz_t());
        }
        if (lead[static_cast<size_t>(u)] < 0 && mpz_sgn(nd.coeffs[sl].get_mpz_t()) != 0)
          lead[static_cast<size_t>(u)] = l;
      } else {
        const int v = u - n_nodes;
        acc = 0;
        for (const auto& r : wc.alt_refs_[static_cast<size_t>(v)]) {
          if (r.kind == UnitRef::Kind::eps) {
            if (l == 0) acc += 1;
          } else {
            acc += wc.unit_count(r, l);
          }
        }
        mpz_swap(wc.nt_coeffs_[static_cast<size_t>(v)][sl].get_mpz_t(), acc.get_mpz_t());
        if (lead[static_cast<size_t>(u)] < 0 &&
            mpz_sgn(wc.nt_coeffs_[static_cast<size_t>(v)][sl].get_mpz_t()) != 0)
          lead[static_cast<size_t>(u)] = l;
      }
    }
  }

  // The pending tile buffers are only needed while extending; drop them so a
  // long-lived WordCounts keeps just the coefficients.
  for (auto& nd : wc.nodes_) nd.relaxed.reset();

  return wc;
}

std::vector<BigInt> count_words(const Grammar& g, long long n_max, CountMode mode) {
  WordCounts wc = WordCounts::compute(g, n_max, mode);
  std::vector<BigInt> out(static_cast<size_t>(n_max) + 1);
  for (long long l = 0; l <= n_max; ++l)
    out[static_cast<size_t>(l)] = wc.count(g.start(), l);
  return out;
}

std::vector<BigInt> oned_counts(const OneDModel& m, long long n_max, bool final_zero) {
  if (n_max < 0) fail(errc::argument, "count length must be nonnegative");
  if (m.a_bar < 1) fail(errc::argument, "projected model has no upward weight");
  std::vector<BigInt> out(static_cast<size_t>(n_max) + 1);

  auto height_cap = [&](long long t) {
    long long cap = t * m.a_bar;
    if (final_zero) cap = std::min(cap, (n_max - t) * m.b_bar);
    return cap;
  };

  std::vector<BigInt> cur(1);
  cur[0] = 1;
  out[0] = 1;
  for (long long t = 1; t <= n_max; ++t) {
    const long long cap = height_cap(t);
    std::vector<BigInt> next(static_cast<size_t>(std::max<long long>(cap, 0)) + 1);
    for (long long h = 0; h < static_cast<long long>(cur.size()); ++h) {
      const auto& c = cur[static_cast<size_t>(h)];
      if (mpz_sgn(c.get_mpz_t()) == 0) continue;
      for (const auto& term : m.terminals) {
        const long long nh = h + term.weight;
        if (nh < 0 || nh > cap) continue;
        next[static_cast<size_t>(nh)] += c;
      }
    }
    cur = std::move(next);
    if (final_zero) {
      if (!cur.empty()) out[static_cast<size_t>(t)] = cur[0];
    } else {
      BigInt s = 0;
      for (const auto& c : cur) s += c;
      out[static_cast<size_t>(t)] = s;
    }
  }
  return out;
}

}  // namespace qwalk
