#pragma once

#include <random>
#include <string>
#include <vector>

#include "msgames/game_state.hpp"
#include "msgames/structure.hpp"

namespace testing {

using namespace msgames;

inline StructurePtr lo(int n) { return make_linear_order(n); }

inline std::vector<StructurePtr> los(const std::vector<int>& sizes) {
  std::vector<StructurePtr> out;
  for (int n : sizes) out.push_back(lo(n));
  return out;
}

inline GameState game(const std::vector<int>& a, const std::vector<int>& b, int rounds, Variant v = {},
                      std::vector<SideConstraint> c = {}) {
  return GameState::make(los(a), los(b), rounds, v, std::move(c));
}

// Directed graph with relation "E" and optional constants c1, c2, ...
inline StructurePtr digraph(int n, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& constants = {}) {
  Vocabulary voc;
  voc.relations = {{"E", 2}};
  for (std::size_t i = 0; i < constants.size(); ++i) voc.constants.push_back("k" + std::to_string(i + 1));
  std::vector<Tuple> tuples;
  for (auto [x, y] : edges) tuples.push_back({x, y});
  return std::make_shared<const Structure>(n, voc, std::vector<std::vector<Tuple>>{tuples}, constants);
}

inline StructurePtr randomDigraph(std::mt19937& rng, int n, double p, int constants = 0) {
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<std::pair<int, int>> edges;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (edge(rng)) edges.push_back({x, y});
  std::vector<int> cs;
  for (int i = 0; i < constants; ++i) cs.push_back(pick(rng));
  return digraph(n, edges, cs);
}

// Linear order on 0..n-1 plus `atoms` unrelated elements marked by a unary
// "atom" relation.
inline StructurePtr orderWithAtoms(int n, int atoms) {
  Vocabulary voc;
  voc.relations = {{"<", 2}, {"atom", 1}};
  voc.hasAtomPredicate = true;
  std::vector<Tuple> less, atom;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) less.push_back({x, y});
  for (int j = 0; j < atoms; ++j) atom.push_back({n + j});
  return std::make_shared<const Structure>(n + atoms, voc, std::vector<std::vector<Tuple>>{less, atom});
}

// Relabels the elements of `s` by `perm`.
inline StructurePtr permuted(const Structure& s, const std::vector<int>& perm) {
  std::vector<std::vector<Tuple>> rels;
  for (int r = 0; r < s.relationCount(); ++r) {
    std::vector<Tuple> ts;
    for (Tuple t : s.tuples(r)) {
      for (int& x : t) x = perm[x];
      ts.push_back(t);
    }
    rels.push_back(ts);
  }
  std::vector<int> cs;
  for (int c = 0; c < s.constantCount(); ++c) cs.push_back(perm[s.constant(c)]);
  return std::make_shared<const Structure>(s.size(), s.vocabulary(), rels, cs);
}

inline Board withHistory(StructurePtr s, const std::vector<Selection>& history, bool atoms = false) {
  Board b(std::move(s), atoms);
  for (Selection x : history) b = extend(b, x);
  return b;
}

inline Selection el(int oneBased) { return Selection::element(oneBased - 1); }

}  // namespace testing
