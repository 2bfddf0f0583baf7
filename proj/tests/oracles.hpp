#pragma once

// Brute-force reference implementations used as test oracles. They follow the
// definitions directly, with no canonical forms, memo tables or pruning beyond
// dropping boards that have no partner.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "msgames/game_state.hpp"
#include "msgames/sentence.hpp"
#include "msgames/structure.hpp"

namespace oracle {

using namespace msgames;

struct Value {
  bool atom;
  int v;
  bool operator==(const Value&) const = default;
};

inline Value valueOf(Selection s) { return {s.isAtom(), s.index()}; }

// Selected values paired across the two boards, constants included.
inline std::vector<std::pair<Value, Value>> pairing(const Board& a, const Board& b) {
  std::vector<std::pair<Value, Value>> p;
  for (int i = 0; i < a.length(); ++i) p.push_back({valueOf(a.at(i)), valueOf(b.at(i))});
  for (int c = 0; c < a.base().constantCount(); ++c)
    p.push_back({{false, a.base().constant(c)}, {false, b.base().constant(c)}});
  return p;
}

inline bool partialIso(const Board& a, const Board& b) {
  if (a.length() != b.length()) return false;
  const auto p = pairing(a, b);
  for (const auto& [x, y] : p)
    if (x.atom != y.atom) return false;
  for (const auto& [x1, y1] : p)
    for (const auto& [x2, y2] : p)
      if ((x1 == x2) != (y1 == y2)) return false;
  std::vector<int> elems;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!p[i].first.atom) elems.push_back(static_cast<int>(i));
  const Structure& sa = a.base();
  const Structure& sb = b.base();
  for (int r = 0; r < sa.relationCount(); ++r) {
    const int k = sa.arity(r);
    std::vector<int> pick(k, 0);
    if (elems.empty()) continue;
    while (true) {
      std::vector<int> ta(k), tb(k);
      for (int j = 0; j < k; ++j) {
        ta[j] = p[elems[pick[j]]].first.v;
        tb[j] = p[elems[pick[j]]].second.v;
      }
      if (sa.holds(r, ta.data()) != sb.holds(r, tb.data())) return false;
      int j = 0;
      while (j < k && ++pick[j] == static_cast<int>(elems.size())) pick[j++] = 0;
      if (j == k) break;
    }
  }
  return true;
}

// Whether some permutation of a's elements carries a onto b, histories included.
inline bool boardsIsomorphic(const Board& a, const Board& b) {
  const Structure& sa = a.base();
  const Structure& sb = b.base();
  if (sa.size() != sb.size() || !(sa.vocabulary() == sb.vocabulary()) || a.length() != b.length()) return false;
  const int n = sa.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; ok && i < a.length(); ++i) {
      const Selection x = a.at(i), y = b.at(i);
      ok = x.isAtom() == y.isAtom() && (x.isAtom() ? x.index() == y.index() : perm[x.index()] == y.index());
    }
    for (int c = 0; ok && c < sa.constantCount(); ++c) ok = perm[sa.constant(c)] == sb.constant(c);
    for (int r = 0; ok && r < sa.relationCount(); ++r) {
      const int k = sa.arity(r);
      std::vector<int> t(k, 0), u(k);
      while (ok) {
        for (int j = 0; j < k; ++j) u[j] = perm[t[j]];
        ok = sa.holds(r, t.data()) == sb.holds(r, u.data());
        int j = 0;
        while (j < k && ++t[j] == n) t[j++] = 0;
        if (j == k) break;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

inline SideConstraint constraintAt(const std::vector<SideConstraint>& c, int round) {
  return round < static_cast<int>(c.size()) ? c[round] : SideConstraint::Free;
}

// Every single selection on a board: elements, then atom ids up to the fresh one.
inline std::vector<Selection> allSelections(const Board& b) {
  std::vector<Selection> out;
  for (int e = 0; e < b.base().size(); ++e) out.push_back(Selection::element(e));
  if (b.atomsEnabled())
    for (int j = 0; j <= b.atomLedger(); ++j) out.push_back(Selection::atom(j));
  return out;
}

inline std::vector<Selection> spoilerSelections(const Board& b, bool noPlayOnTop) {
  std::vector<Selection> out;
  for (Selection s : allSelections(b)) {
    if (noPlayOnTop && !s.isAtom()) {
      bool taken = false;
      for (int i = 0; i < b.length(); ++i) taken |= b.at(i) == s;
      if (taken) continue;
    }
    out.push_back(s);
  }
  return out;
}

inline bool efSpoilerWins(const Board& a, const Board& b, int k, const std::vector<SideConstraint>& c = {},
                          int round = 0) {
  if (!partialIso(a, b)) return true;
  if (k == 0) return false;
  for (Side side : {Side::A, Side::B}) {
    if (!allows(constraintAt(c, round), side)) continue;
    const Board& x = side == Side::A ? a : b;
    const Board& y = side == Side::A ? b : a;
    for (int e = 0; e < x.base().size(); ++e) {
      const Board nx = extend(x, Selection::element(e));
      bool wins = true;
      for (int f = 0; wins && f < y.base().size(); ++f) {
        const Board ny = extend(y, Selection::element(f));
        wins = side == Side::A ? efSpoilerWins(nx, ny, k - 1, c, round + 1) : efSpoilerWins(ny, nx, k - 1, c, round + 1);
      }
      if (wins) return true;
    }
  }
  return false;
}

inline bool sameBoard(const Board& x, const Board& y) {
  if (x.basePtr() != y.basePtr() || x.length() != y.length()) return false;
  for (int i = 0; i < x.length(); ++i)
    if (x.at(i) != y.at(i)) return false;
  return true;
}

inline void dropDuplicates(std::vector<Board>& v) {
  std::vector<Board> out;
  for (const Board& b : v)
    if (std::none_of(out.begin(), out.end(), [&](const Board& o) { return sameBoard(o, b); })) out.push_back(b);
  v = std::move(out);
}

// Multi-structural game, straight from the definition: Spoiler picks a side
// and one selection per board there, Duplicator answers with every extension
// of every board on the other side.
inline bool msSpoilerWins(std::vector<Board> A, std::vector<Board> B, int k, const std::vector<SideConstraint>& c,
                          Variant v, int round = 0) {
  std::vector<Board> a2, b2;
  for (const Board& a : A)
    if (std::any_of(B.begin(), B.end(), [&](const Board& b) { return partialIso(a, b); })) a2.push_back(a);
  for (const Board& b : B)
    if (std::any_of(A.begin(), A.end(), [&](const Board& a) { return partialIso(a, b); })) b2.push_back(b);
  if (a2.empty()) return true;
  if (k == 0) return false;
  dropDuplicates(a2);
  dropDuplicates(b2);
  for (Side side : {Side::A, Side::B}) {
    if (!allows(constraintAt(c, round), side)) continue;
    const std::vector<Board>& xs = side == Side::A ? a2 : b2;
    const std::vector<Board>& ys = side == Side::A ? b2 : a2;
    std::vector<Board> yext;
    for (const Board& y : ys)
      for (Selection s : allSelections(y)) yext.push_back(extend(y, s));
    std::vector<std::vector<Selection>> choices;
    for (const Board& x : xs) choices.push_back(spoilerSelections(x, v.noPlayOnTop));
    if (std::any_of(choices.begin(), choices.end(), [](const auto& ch) { return ch.empty(); })) continue;
    if (k == 1) {
      // After the last round only pairs matter, so each board is settled on its own.
      bool all = true;
      for (std::size_t i = 0; all && i < xs.size(); ++i) {
        bool killed = false;
        for (Selection s : choices[i]) {
          const Board nx = extend(xs[i], s);
          killed = std::none_of(yext.begin(), yext.end(), [&](const Board& y) {
            return side == Side::A ? partialIso(nx, y) : partialIso(y, nx);
          });
          if (killed) break;
        }
        all = killed;
      }
      if (all) return true;
      continue;
    }
    std::vector<std::size_t> pick(xs.size(), 0);
    while (true) {
      std::vector<Board> nx;
      for (std::size_t i = 0; i < xs.size(); ++i) nx.push_back(extend(xs[i], choices[i][pick[i]]));
      const bool wins = side == Side::A ? msSpoilerWins(nx, yext, k - 1, c, v, round + 1)
                                        : msSpoilerWins(yext, nx, k - 1, c, v, round + 1);
      if (wins) return true;
      std::size_t j = 0;
      while (j < xs.size() && ++pick[j] == choices[j].size()) pick[j++] = 0;
      if (j == xs.size()) break;
    }
  }
  return false;
}

inline bool msSpoilerWins(const GameState& s) {
  return msSpoilerWins(s.sideA, s.sideB, s.roundsLeft, s.constraints, s.variant);
}

// Direct recursive evaluation over the whole domain.
struct Evaluator {
  const Model& m;
  std::map<std::string, int> env;

  int size() const { return m.structure->size() + m.atoms; }

  int value(const std::string& name) const {
    if (auto it = env.find(name); it != env.end()) return it->second;
    for (const auto& [n, v] : m.named)
      if (n == name) return v;
    const int c = m.structure->vocabulary().constantIndex(name);
    if (c >= 0) return m.structure->constant(c);
    throw UsageError("unbound " + name);
  }

  bool holds(const std::string& rel, const std::vector<std::string>& terms) const {
    const Structure& s = *m.structure;
    const int r = s.vocabulary().relationIndex(rel);
    if (r < 0) throw UsageError("no relation " + rel);
    std::vector<int> args;
    for (const auto& t : terms) {
      args.push_back(value(t));
      if (args.back() >= s.size()) return false;
    }
    return s.holds(r, args.data());
  }

  bool operator()(const Sentence& f) {
    switch (f->kind) {
      case NodeKind::Exists:
      case NodeKind::Forall: {
        const bool ex = f->kind == NodeKind::Exists;
        auto saved = env.find(f->name) != env.end() ? std::optional<int>(env[f->name]) : std::nullopt;
        bool result = !ex;
        for (int d = 0; d < size(); ++d) {
          env[f->name] = d;
          if ((*this)(f->kids[0]) == ex) {
            result = ex;
            break;
          }
        }
        if (saved) env[f->name] = *saved;
        else env.erase(f->name);
        return result;
      }
      case NodeKind::And:
        return std::all_of(f->kids.begin(), f->kids.end(), [&](const Sentence& k) { return (*this)(k); });
      case NodeKind::Or:
        return std::any_of(f->kids.begin(), f->kids.end(), [&](const Sentence& k) { return (*this)(k); });
      case NodeKind::Not: return !(*this)(f->kids[0]);
      case NodeKind::Implies: return !(*this)(f->kids[0]) || (*this)(f->kids[1]);
      case NodeKind::Eq: return value(f->terms[0]) == value(f->terms[1]);
      case NodeKind::Less: return holds("<", f->terms);
      case NodeKind::Rel: return holds(f->name, f->terms);
      case NodeKind::AtomPred: {
        const int v = value(f->terms[0]);
        if (v >= m.structure->size()) return true;
        return m.structure->vocabulary().relationIndex("atom") >= 0 && holds("atom", f->terms);
      }
    }
    return false;
  }
};

inline bool eval(const Sentence& s, const Model& m) { return Evaluator{m, {}}(s); }

}  // namespace oracle
