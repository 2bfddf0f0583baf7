#include <algorithm>

#include "msgames/strategy_lab.hpp"

namespace msgames {

namespace {

// Halving strategy: always move on the larger order, at its middle point
// within the current frame, and keep both frames on the side where the
// smaller order's reply left too little room. Play stays within the first
// |L| + 1 elements of the larger order, which is all the argument needs.
std::pair<Side, Selection> halvingMove(const Board& a, const Board& b, int) {
  if (!a.isLinearOrder() || !b.isLinearOrder()) throw ScriptDefect("appendix_a: needs plain linear orders");
  if (a.base().size() == b.base().size()) throw ScriptDefect("appendix_a: needs orders of different sizes");
  const Side bigSide = a.base().size() > b.base().size() ? Side::A : Side::B;
  const Board& big = bigSide == Side::A ? a : b;
  const Board& little = bigSide == Side::A ? b : a;
  int blo = 0, bhi = std::min(big.base().size() - 1, little.base().size()), llo = 0;
  auto middle = [&] {
    const int size = bhi - blo + 1;
    return size % 2 == 1 ? blo + size / 2 : blo + size / 2 - 1;
  };
  for (int i = 0; i < big.length(); ++i) {
    Selection s = big.at(i), d = little.at(i);
    if (s.isAtom() || d.isAtom()) throw ScriptDefect("appendix_a: atoms are not supported");
    const int size = bhi - blo + 1, k = size / 2;
    const int sp = s.index(), dp = d.index();
    const bool goLeft = size % 2 == 1 ? dp - llo < k : dp - llo + 1 <= k - 1;
    if (goLeft) {
      bhi = sp - 1;
    } else {
      blo = sp + 1;
      llo = dp + 1;
    }
  }
  if (bhi < blo) throw ScriptDefect("appendix_a: frame on the larger order is empty");
  return {bigSide, Selection::element(middle())};
}

std::unique_ptr<EfStrategy> play(const EfScript& script, const Board& a, const Board& b, int k, std::size_t& lines,
                                 bool& won) {
  auto node = std::make_unique<EfStrategy>();
  if (!partial_iso(a, b)) {
    ++lines;
    return node;
  }
  if (k == 0) {
    ++lines;
    won = false;
    return node;
  }
  auto [side, move] = script.move(a, b, k);
  const Board& x = side == Side::A ? a : b;
  const Board& y = side == Side::A ? b : a;
  if (!x.validSelection(move)) throw ScriptDefect(script.name + ": invalid selection " + move.token());
  node->leaf = false;
  node->side = side;
  node->move = move;
  const Board nx = extend(x, move);
  for (int t = 0; t < y.candidateCount() && won; ++t) {
    const Selection reply = y.candidate(t);
    const Board ny = extend(y, reply);
    auto next = side == Side::A ? play(script, nx, ny, k - 1, lines, won) : play(script, ny, nx, k - 1, lines, won);
    node->branches.push_back({reply, std::move(next)});
  }
  return node;
}

}  // namespace

EfScript ef_script(const std::string& name) {
  if (name == "appendix_a") return {name, halvingMove};
  throw UsageError("unknown E-F script '" + name + "'");
}

EfRunOutcome run_ef_spoiler(const EfScript& script, const Board& a, const Board& b, int rounds) {
  EfRunOutcome out;
  bool won = true;
  std::unique_ptr<EfStrategy> tree = play(script, a, b, rounds, out.lines, won);
  out.spoilerWins = won;
  if (won) out.witness = std::shared_ptr<EfStrategy>(std::move(tree));
  return out;
}

}  // namespace msgames
