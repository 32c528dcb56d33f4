#include "qwalk/grammar.hpp"

#include <algorithm>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk {

int Grammar::nt_l(long long i) const {
  if (i < 1 || i > model_.a_bar) fail(errc::argument, "L index out of range");
  return 2 + static_cast<int>(i);
}

int Grammar::nt_r(long long j) const {
  if (j < 1 || j > model_.b_bar) fail(errc::argument, "R index out of range");
  return 2 + static_cast<int>(model_.a_bar + j);
}

Grammar Grammar::build(const OneDModel& m) {
  if (m.a_bar < 1 || m.b_bar < 1)
    fail(errc::argument, "grammar needs both an upward and a downward weight");
  for (const auto& t : m.terminals) {
    if (t.weight > m.a_bar || -t.weight > m.b_bar)
      fail(errc::argument, "terminal weight exceeds declared extremes");
  }

  Grammar g;
  g.model_ = m;
  const long long ab = m.a_bar, bb = m.b_bar;
  g.nts_.resize(static_cast<size_t>(3 + ab + bb));

  auto& P = g.nts_[0];
  auto& Paux = g.nts_[1];
  auto& D = g.nts_[2];
  P.name = "P";
  P.weight_fixed = false;
  Paux.name = "Paux";
  Paux.weight_fixed = false;
  D.name = "D";
  D.weight = 0;
  for (long long i = 1; i <= ab; ++i) {
    auto& L = g.nts_[g.nt_l(i)];
    L.name = "L" + std::to_string(i);
    L.weight = i;
  }
  for (long long j = 1; j <= bb; ++j) {
    auto& R = g.nts_[g.nt_r(j)];
    R.name = "R" + std::to_string(j);
    R.weight = -j;
  }

  const int iP = 0, iPaux = 1, iD = 2;

  // P = D Paux
  P.alts.push_back({{Symbol::nt(iD), Symbol::nt(iPaux)}});

  // Paux = eps | L_k D Paux
  Paux.alts.push_back({{}});
  for (long long k = 1; k <= ab; ++k)
    Paux.alts.push_back({{Symbol::nt(g.nt_l(k)), Symbol::nt(iD), Symbol::nt(iPaux)}});

  // D = eps | z D | L_k D R_k D
  D.alts.push_back({{}});
  for (const auto& t : m.terminals)
    if (t.weight == 0) D.alts.push_back({{Symbol::term(t.id), Symbol::nt(iD)}});
  for (long long k = 1; k <= std::min(ab, bb); ++k)
    D.alts.push_back({{Symbol::nt(g.nt_l(k)), Symbol::nt(iD), Symbol::nt(g.nt_r(k)),
                       Symbol::nt(iD)}});

  // L_i = t(+i) | L_k D R_{k-i}
  for (long long i = 1; i <= ab; ++i) {
    auto& L = g.nts_[g.nt_l(i)];
    for (const auto& t : m.terminals)
      if (t.weight == i) L.alts.push_back({{Symbol::term(t.id)}});
    for (long long k = i + 1; k <= std::min(ab, i + bb); ++k)
      L.alts.push_back(
          {{Symbol::nt(g.nt_l(k)), Symbol::nt(iD), Symbol::nt(g.nt_r(k - i))}});
  }

  // R_j = t(-j) | L_{k-j} D R_k
  for (long long j = 1; j <= bb; ++j) {
    auto& R = g.nts_[g.nt_r(j)];
    for (const auto& t : m.terminals)
      if (t.weight == -j) R.alts.push_back({{Symbol::term(t.id)}});
    for (long long k = j + 1; k <= std::min(j + ab, bb); ++k)
      R.alts.push_back(
          {{Symbol::nt(g.nt_l(k - j)), Symbol::nt(iD), Symbol::nt(g.nt_r(k))}});
  }

  return g;
}

Nonterminal& Grammar::mutable_nonterminal(int idx) {
  if (idx < 0 || idx >= static_cast<int>(nts_.size()))
    fail(errc::argument, "nonterminal index out of range");
  return nts_[static_cast<size_t>(idx)];
}

std::string Grammar::to_text() const {
  std::ostringstream out;
  out << "terminals:\n";
  for (const auto& t : model_.terminals)
    out << "  t" << t.id << "  weight " << (t.weight >= 0 ? "+" : "") << t.weight
        << "  (step " << t.origin_index << ")\n";
  out << "rules:\n";
  for (const auto& nt : nts_) {
    out << "  " << nt.name << " ->";
    bool first = true;
    for (const auto& alt : nt.alts) {
      out << (first ? " " : " | ");
      first = false;
      if (alt.symbols.empty()) {
        out << "eps";
      } else {
        bool fs = true;
        for (const auto& s : alt.symbols) {
          if (!fs) out << " ";
          fs = false;
          if (s.kind == Symbol::Kind::terminal)
            out << "t" << s.index;
          else
            out << nts_[static_cast<size_t>(s.index)].name;
        }
      }
    }
    out << "\n";
  }
  return out.str();
}

std::vector<std::string> Grammar::validate() const {
  std::vector<std::string> issues;
  const int n_nts = static_cast<int>(nts_.size());
  const int n_terms = static_cast<int>(model_.terminals.size());

  for (int v = 0; v < n_nts; ++v) {
    const auto& nt = nts_[static_cast<size_t>(v)];
    for (size_t a = 0; a < nt.alts.size(); ++a) {
      bool refs_ok = true;
      for (const auto& s : nt.alts[a].symbols) {
        const bool bad =
            s.kind == Symbol::Kind::terminal
                ? (s.index < 0 || s.index >= n_terms)
                : (s.index < 0 || s.index >= n_nts);
        if (bad) {
          issues.push_back("rule " + nt.name + ", alternative " + std::to_string(a) +
                           ": dangling " +
                           (s.kind == Symbol::Kind::terminal ? "terminal" : "nonterminal") +
                           " reference " + std::to_string(s.index));
          refs_ok = false;
        }
      }
      if (!refs_ok || !nt.weight_fixed) continue;
      // Weight bookkeeping only makes sense when every referenced piece has a
      // fixed weight itself.
      long long w = 0;
      bool fixed = true;
      for (const auto& s : nt.alts[a].symbols) {
        if (s.kind == Symbol::Kind::terminal) {
          w += model_.terminals[static_cast<size_t>(s.index)].weight;
        } else if (nts_[static_cast<size_t>(s.index)].weight_fixed) {
          w += nts_[static_cast<size_t>(s.index)].weight;
        } else {
          fixed = false;
        }
      }
      if (fixed && w != nt.weight)
        issues.push_back("rule " + nt.name + ", alternative " + std::to_string(a) +
                         ": weight " + std::to_string(w) + ", expected " +
                         std::to_string(nt.weight));
    }
  }
  if (!issues.empty()) return issues;  // later passes assume resolvable refs

  // Productivity: fixpoint of "derives at least one finite word".
  std::vector<char> productive(static_cast<size_t>(n_nts), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < n_nts; ++v) {
      if (productive[static_cast<size_t>(v)]) continue;
      for (const auto& alt : nts_[static_cast<size_t>(v)].alts) {
        bool ok = true;
        for (const auto& s : alt.symbols)
          if (s.kind == Symbol::Kind::nonterminal &&
              !productive[static_cast<size_t>(s.index)])
            ok = false;
        if (ok) {
          productive[static_cast<size_t>(v)] = 1;
          changed = true;
          break;
        }
      }
    }
  }
  for (int v = 0; v < n_nts; ++v)
    if (!productive[static_cast<size_t>(v)])
      issues.push_back("rule " + nts_[static_cast<size_t>(v)].name +
                       ": derives no finite word");

  // Reachability from the start symbol.
  std::vector<char> reach(static_cast<size_t>(n_nts), 0);
  reach[0] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < n_nts; ++v) {
      if (!reach[static_cast<size_t>(v)]) continue;
      for (const auto& alt : nts_[static_cast<size_t>(v)].alts)
        for (const auto& s : alt.symbols)
          if (s.kind == Symbol::Kind::nonterminal && !reach[static_cast<size_t>(s.index)]) {
            reach[static_cast<size_t>(s.index)] = 1;
            changed = true;
          }
    }
  }
  for (int v = 0; v < n_nts; ++v)
    if (!reach[static_cast<size_t>(v)])
      issues.push_back("rule " + nts_[static_cast<size_t>(v)].name +
                       ": unreachable from " + nts_[0].name);

  return issues;
}

}  // namespace qwalk
