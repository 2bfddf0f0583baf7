#include <span>

#include "msgames/bounds.hpp"
#include "msgames/strategy_lab.hpp"

namespace msgames {

namespace {

[[noreturn]] void defect(const std::string& script, const std::string& what) {
  throw ScriptDefect(script + ": " + what);
}

struct Frame {
  int lo, hi;
  int size() const { return hi - lo + 1; }
  bool contains(int p) const { return p >= lo && p <= hi; }
};

int center(const Frame& f) { return f.lo + (f.size() - 1) / 2; }

// The larger of the two regions around p, the right one on a tie.
Frame longRegion(const Frame& f, int p) {
  Frame left{f.lo, p - 1}, right{p + 1, f.hi};
  return right.size() >= left.size() ? right : left;
}

// The smaller of the two regions around p, the left one on a tie.
Frame shortRegion(const Frame& f, int p) {
  Frame left{f.lo, p - 1}, right{p + 1, f.hi};
  return left.size() <= right.size() ? left : right;
}

Frame sideOf(const Frame& f, int c, int p) { return p < c ? Frame{f.lo, c - 1} : Frame{c + 1, f.hi}; }

// Spoiler's move on one board of the r-round frame game between a big and a
// little linear order. h holds the selections made on this board in the
// frame game so far; sides alternate so that the last round is on the big
// side. The last round itself is not handled here (see killMove).
int frameMove(const std::string& name, int r, bool big, Frame f, std::span<const int> h) {
  const int k = static_cast<int>(h.size());
  auto need = [&](int p) {
    if (!f.contains(p)) defect(name, "selection outside the frame on an alive board");
  };
  if (r == 4) {
    if (k == 0) return center(f);  // little side
    if (k == 1) {                  // big side
      need(h[0]);
      return center(longRegion(f, h[0]));
    }
    if (k == 2) {  // little side: answer the reply d2 relative to s1
      const int s1 = h[0], d2 = h[1];
      need(d2);
      if (d2 == s1 || d2 == s1 - 1 || d2 == s1 + 1) return s1;
      if (d2 == f.lo || d2 == f.hi) return d2;
      if (d2 == s1 - 2) return s1 - 1;
      if (d2 == s1 + 2) return s1 + 1;
      if (d2 == f.lo + 1) return f.lo;
      if (d2 == f.hi - 1) return f.hi;
      defect(name, "no rule for a reply at position " + std::to_string(d2 + 1) + " in frame " +
                       std::to_string(f.lo + 1) + ".." + std::to_string(f.hi + 1) + " after " + std::to_string(s1 + 1));
    }
    defect(name, "frame game of 4 rounds asked for round " + std::to_string(k + 1));
  }
  if (r % 2 == 1) {
    if (k == 0) return center(f);  // big side
    if (big) {
      const int c = h[0], d2 = h[1];
      if (d2 == c) return c;
      need(d2);
      return frameMove(name, r - 1, true, sideOf(f, c, d2), h.subspan(1));
    }
    const int d1 = h[0];
    need(d1);
    Frame s = shortRegion(f, d1);
    if (s.size() > 0) return frameMove(name, r - 1, false, s, h.subspan(1));
    // d1 sits at an end: repeat it, stepping inward on the second-to-last round.
    if (k == r - 2) {
      if (d1 == f.lo && d1 + 1 <= f.hi) return d1 + 1;
      if (d1 == f.hi && d1 - 1 >= f.lo) return d1 - 1;
    }
    return d1;
  }
  if (k == 0) return center(f);  // little side
  if (big) {
    need(h[0]);
    return frameMove(name, r - 1, true, longRegion(f, h[0]), h.subspan(1));
  }
  const int c = h[0], d2 = h[1];
  if (d2 == c) return c;
  need(d2);
  return frameMove(name, r - 1, false, sideOf(f, c, d2), h.subspan(1));
}

// Positions selected on b during the match so far.
std::vector<int> matchHistory(const std::string& name, const Board& b, int round) {
  std::vector<int> h;
  for (int i = b.length() - round; i < b.length(); ++i) {
    Selection s = b.at(i);
    if (s.isAtom()) defect(name, "atom in the history of an alive board");
    h.push_back(s.index());
  }
  return h;
}

bool pairAlive(const MatchView& v, Side xs, const Board& x, const Board& y) {
  const Board& a = xs == Side::A ? x : y;
  const Board& b = xs == Side::A ? y : x;
  return partial_iso(a, b) && (!v.filter || v.filter(a, b));
}

// First legal selection on board i of side xs after which no extension of any
// alive partner stays alive; the first legal selection if there is none.
Selection killMove(const MatchView& v, Side xs, int i) {
  const Board& x = (*v.side[index(xs)])[i];
  const auto& partners = (*v.adj[index(xs)])[i];
  const auto& ys = *v.side[1 - index(xs)];
  std::vector<Selection> legal = legal_selections(x, v.variant);
  if (legal.empty()) throw ScriptDefect("no legal selection on " + describe(x));
  for (Selection s : legal) {
    Board nx = extend(x, s);
    bool kills = true;
    for (int j : partners) {
      const Board& y = ys[j];
      for (int t = 0; t < y.candidateCount() && kills; ++t)
        if (pairAlive(v, xs, nx, extend(y, y.candidate(t)))) kills = false;
      if (!kills) break;
    }
    if (kills) return s;
  }
  return legal.front();
}

SpoilerMove killAll(const MatchView& v, Side xs) {
  SpoilerMove m{xs, {}};
  for (std::size_t i = 0; i < v.side[index(xs)]->size(); ++i)
    m.selections.push_back(killMove(v, xs, static_cast<int>(i)));
  return m;
}

int sideSize(const std::string& name, const std::vector<Board>& boards) {
  int n = -1;
  for (const Board& b : boards) {
    if (!b.isLinearOrder()) defect(name, "needs plain linear orders");
    if (n >= 0 && b.base().size() != n) defect(name, "boards on one side must have equal sizes");
    n = b.base().size();
  }
  return n;
}

// Side holding the larger linear order.
Side bigSide(const std::string& name, const MatchView& v) {
  const int na = sideSize(name, *v.side[0]), nb = sideSize(name, *v.side[1]);
  if (na == nb) defect(name, "needs orders of different sizes");
  return na > nb ? Side::A : Side::B;
}

SpoilerMove frameScript(const std::string& name, const MatchView& v) {
  const int r = v.rounds;
  const Side big = bigSide(name, v);
  const std::uint64_t g = g_closed(r);
  if (static_cast<std::uint64_t>(sideSize(name, *v.side[index(big)])) < g ||
      static_cast<std::uint64_t>(sideSize(name, *v.side[1 - index(big)])) >= g)
    defect(name, "needs the larger order of size at least " + std::to_string(g) + " and the smaller below it");
  const Side xs = (r - (v.round + 1)) % 2 == 0 ? big : other(big);
  if (v.round == r - 1) return killAll(v, xs);
  SpoilerMove m{xs, {}};
  for (const Board& b : *v.side[index(xs)]) {
    std::vector<int> h = matchHistory(name, b, v.round);
    m.selections.push_back(Selection::element(frameMove(name, r, xs == big, Frame{0, b.base().size() - 1}, h)));
  }
  return m;
}

// The line that refutes copying the little order's first move onto the big
// one and treating the right-hand sides as a 5 vs 4 game.
SpoilerMove interludeScript(const MatchView& v) {
  const std::string name = "interlude";
  if (v.rounds != 4) defect(name, "plays 4 rounds");
  const Side big = bigSide(name, v);
  if (sideSize(name, *v.side[index(big)]) != 10 || sideSize(name, *v.side[1 - index(big)]) != 9)
    defect(name, "plays 10 vs 9");
  const Side little = other(big);
  SpoilerMove m;
  switch (v.round) {
    case 0:
      m.side = little;
      for (std::size_t i = 0; i < v.side[index(little)]->size(); ++i) m.selections.push_back(Selection::element(4));
      return m;
    case 1:
      m.side = big;
      for (std::size_t i = 0; i < v.side[index(big)]->size(); ++i) m.selections.push_back(Selection::element(7));
      return m;
    case 2:
      m.side = little;
      for (const Board& b : *v.side[index(little)]) {
        std::vector<int> h = matchHistory(name, b, 2);
        int p = h[0];
        switch (h[1]) {
          case 5: p = 4; break;
          case 6: p = 5; break;
          case 7: p = 8; break;
          case 8: p = 8; break;
        }
        m.selections.push_back(Selection::element(p));
      }
      return m;
    default: return killAll(v, big);
  }
}

void needOneBoardPerSide(const std::string& name, const GameState& s) {
  if (s.sideA.size() != 1 || s.sideB.size() != 1) defect(name, "needs exactly one board per side");
}

// Answer on y to selection s on x: the same atom, or the element that leaves
// a short side of the same size on the same end.
Selection shortSideReply(const std::string& name, const Board& x, Selection s, const Board& y) {
  if (s.isAtom()) {
    Selection t = Selection::atom(s.index() == x.atomLedger() ? y.atomLedger() : s.index());
    if (!y.validSelection(t)) defect(name, "cannot copy atom " + s.token());
    return t;
  }
  const int p = s.index(), n = x.base().size(), m = y.base().size();
  const int left = p, right = n - 1 - p;
  const int q = left <= right ? p : m - 1 - right;
  if (q < 0 || q >= m) defect(name, "short side does not fit on the other board");
  return Selection::element(q);
}

std::vector<std::vector<Selection>> shortSideScript(const std::string& name, const GameState& before,
                                                    const SpoilerMove& move) {
  needOneBoardPerSide(name, before);
  const Board& x = before.side(move.side).front();
  const Board& y = before.side(other(move.side)).front();
  return {{shortSideReply(name, x, move.selections.at(0), y)}};
}

// Pact from the latest selections on the single board of each side, which
// must leave equal short sides at the same end. Empty when atoms are involved
// or when a side holds more than one board.
PairFilter alignedPact(const std::string& name, const GameState& after, bool required) {
  if (after.sideA.size() != 1 || after.sideB.size() != 1) {
    if (required) defect(name, "needs exactly one board per side");
    return {};
  }
  const Board& a = after.sideA.front();
  const Board& b = after.sideB.front();
  if (a.length() == 0) {
    if (required) defect(name, "needs a selection on both boards");
    return {};
  }
  Selection sa = a.at(a.length() - 1), sb = b.at(b.length() - 1);
  if (sa.isAtom() || sb.isAtom()) {
    if (required && !(sa == sb)) defect(name, "latest selections are not aligned");
    return {};
  }
  const int na = a.base().size(), nb = b.base().size();
  const int pa = sa.index(), pb = sb.index();
  const bool fromLeft = pa == pb, fromRight = na - pa == nb - pb;
  if (fromLeft && (!fromRight || pa <= na - 1 - pa)) return mirror_pact(pa + 1, true);
  if (fromRight) return mirror_pact(na - pa, false);
  defect(name, "latest selections are not aligned");
}

DuplicatorScript shortSide(const std::string& name) {
  DuplicatorScript d;
  d.name = name;
  d.scriptedRounds = 1;
  d.copyBound = 1;
  d.reply = [name](const GameState& before, const SpoilerMove& move) {
    return shortSideScript(name, before, move);
  };
  d.pact = [name](const GameState& after) { return alignedPact(name, after, false); };
  return d;
}

}  // namespace

PairFilter mirror_pact(int h, bool fromLeft) {
  return [h, fromLeft](const Board& a, const Board& b) {
    const int na = a.base().size(), nb = b.base().size();
    for (int i = 0; i < a.length(); ++i) {
      Selection sa = a.at(i), sb = b.at(i);
      if (sa.isAtom() || sb.isAtom()) continue;
      const int pa = fromLeft ? sa.index() + 1 : na - sa.index();
      const int pb = fromLeft ? sb.index() + 1 : nb - sb.index();
      if ((pa <= h) != (pb <= h)) return false;
      if (pa <= h && pa != pb) return false;
    }
    return true;
  };
}

SpoilerScript spoiler_script(const std::string& name) {
  if (name == "ten_v_nine")
    return {name, [name](const MatchView& v) {
              if (v.rounds != 4) defect(name, "plays 4 rounds");
              return frameScript(name, v);
            }};
  if (name == "middle_recursive")
    return {name, [name](const MatchView& v) {
              if (v.rounds < 4) defect(name, "needs at least 4 rounds");
              return frameScript(name, v);
            }};
  if (name == "interlude") return {name, interludeScript};
  throw UsageError("unknown Spoiler script '" + name + "'");
}

std::vector<std::string> spoiler_script_names() { return {"ten_v_nine", "middle_recursive", "interlude"}; }

DuplicatorScript duplicator_script(const std::string& name) {
  if (name == "oblivious") {
    DuplicatorScript d;
    d.name = name;
    d.pact = [](const GameState&) { return PairFilter{}; };
    return d;
  }
  if (name == "reduction") {
    DuplicatorScript d;
    d.name = name;
    d.pact = [name](const GameState& after) { return alignedPact(name, after, true); };
    return d;
  }
  if (name == "short_side" || name == "naive_mirror") return shortSide(name);
  if (name == "split_board") {
    DuplicatorScript d = shortSide(name);
    d.copyBound = 2;
    d.reply = [name](const GameState& before, const SpoilerMove& move) -> std::vector<std::vector<Selection>> {
      needOneBoardPerSide(name, before);
      const Board& x = before.side(move.side).front();
      const Board& y = before.side(other(move.side)).front();
      const Selection s = move.selections.at(0);
      const int n = x.base().size(), m = y.base().size();
      // The middle of a big order of odd size: answer both neighbours of the
      // middle on two copies.
      if (!s.isAtom() && n % 2 == 1 && n == m + 1 && s.index() == n / 2)
        return {{Selection::element(n / 2 - 1), Selection::element(n / 2)}};
      return shortSideScript(name, before, move);
    };
    return d;
  }
  throw UsageError("unknown Duplicator script '" + name + "'");
}

std::vector<std::string> duplicator_script_names() {
  return {"oblivious", "reduction", "short_side", "naive_mirror", "split_board"};
}

SpoilerScript certificate_script(SpoilerCertificate cert) {
  return {"certificate", [cert = std::move(cert)](const MatchView& v) {
            if (v.round >= static_cast<int>(cert.rounds.size()))
              throw ScriptDefect("certificate: no plan for round " + std::to_string(v.round + 1));
            const RoundPlan& plan = cert.rounds[v.round];
            try {
              return SpoilerMove{plan.side, plan_selections(plan, *v.side[index(plan.side)])};
            } catch (const UsageError& e) {
              throw ScriptDefect(std::string("certificate: ") + e.what());
            }
          }};
}

}  // namespace msgames
