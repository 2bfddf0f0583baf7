#include <algorithm>
#include <array>

#include "msgames/strategy_lab.hpp"

namespace msgames {

namespace {

struct Live {
  std::vector<std::string> id[2];
  std::vector<Board> side[2];
  std::vector<std::vector<int>> adj[2];

  bool finished() const { return side[0].empty() || side[1].empty(); }
  std::size_t boards() const { return side[0].size() + side[1].size(); }
};

bool alive(const Board& a, const Board& b, const PairFilter& filter) {
  return partial_iso(a, b) && (!filter || filter(a, b));
}

// Recomputes adjacency among the current boards restricted to `candidates`
// (pairs that were alive before), then drops boards with no partner.
// Returns which boards of each side were kept.
std::array<std::vector<char>, 2> rebuild(Live& l, const std::vector<std::vector<int>>& candidatesA,
                                         const PairFilter& filter) {
  l.adj[0].assign(l.side[0].size(), {});
  l.adj[1].assign(l.side[1].size(), {});
  for (std::size_t i = 0; i < l.side[0].size(); ++i)
    for (int j : candidatesA[i])
      if (alive(l.side[0][i], l.side[1][j], filter)) {
        l.adj[0][i].push_back(j);
        l.adj[1][j].push_back(static_cast<int>(i));
      }
  std::vector<int> remap[2];
  for (int s = 0; s < 2; ++s) {
    remap[s].assign(l.side[s].size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < l.side[s].size(); ++i)
      if (!l.adj[s][i].empty()) remap[s][i] = next++;
  }
  std::array<std::vector<char>, 2> kept;
  Live out;
  for (int s = 0; s < 2; ++s)
    for (std::size_t i = 0; i < l.side[s].size(); ++i) {
      kept[s].push_back(remap[s][i] >= 0);
      if (remap[s][i] < 0) continue;
      out.id[s].push_back(l.id[s][i]);
      out.side[s].push_back(l.side[s][i]);
      std::vector<int> row;
      for (int j : l.adj[s][i]) row.push_back(remap[1 - s][j]);
      out.adj[s].push_back(std::move(row));
    }
  l = std::move(out);
  return kept;
}

std::vector<std::vector<int>> allPairs(const Live& l) {
  std::vector<int> row(l.side[1].size());
  for (std::size_t j = 0; j < row.size(); ++j) row[j] = static_cast<int>(j);
  return std::vector<std::vector<int>>(l.side[0].size(), row);
}

GameState stateOf(const Live& l, int roundsLeft, const GameState& start, int round) {
  GameState s;
  s.sideA = l.side[0];
  s.sideB = l.side[1];
  s.roundsLeft = roundsLeft;
  for (int i = round; i < static_cast<int>(start.constraints.size()); ++i) s.constraints.push_back(start.constraints[i]);
  s.variant = start.variant;
  return s;
}

void checkMove(const std::string& name, const GameState& state, int round, const std::vector<Board>& xs,
               const SpoilerMove& mv) {
  if (!allows(state.constraintAt(round), mv.side))
    throw ScriptDefect(name + ": moves on a side the constraints forbid in round " + std::to_string(round + 1));
  if (mv.selections.size() != xs.size())
    throw ScriptDefect(name + ": expected " + std::to_string(xs.size()) + " selections, got " +
                       std::to_string(mv.selections.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Selection s = mv.selections[i];
    if (!xs[i].validSelection(s)) throw ScriptDefect(name + ": invalid selection " + s.token());
    if (state.variant.noPlayOnTop && !s.isAtom() && xs[i].isSelected(s.index()))
      throw ScriptDefect(name + ": plays on top in a no-play-on-top game");
  }
}

std::vector<std::vector<Selection>> duplicatorReplies(const DuplicatorScript& d, const GameState& before,
                                                      const SpoilerMove& mv) {
  std::vector<std::vector<Selection>> replies = d.reply(before, mv);
  const std::vector<Board>& ys = before.side(other(mv.side));
  if (replies.size() != ys.size()) throw ScriptDefect(d.name + ": one reply list per board expected");
  for (std::size_t j = 0; j < ys.size(); ++j) {
    if (replies[j].empty() || static_cast<int>(replies[j].size()) > d.copyBound)
      throw ScriptDefect(d.name + ": copy bound exceeded or no copy made");
    for (Selection t : replies[j])
      if (!ys[j].validSelection(t)) throw ScriptDefect(d.name + ": invalid reply " + t.token());
  }
  return replies;
}

RoundPlan planOf(Side side, const std::vector<Board>& boards, const std::vector<Selection>& sels) {
  RoundPlan plan;
  plan.side = side;
  for (std::size_t i = 0; i < boards.size(); ++i) {
    CanonicalForm form = canonical_form(boards[i]);
    plan.moves[form.key] = to_canonical(form, sels[i]);
  }
  return plan;
}

}  // namespace

RunOutcome run_spoiler(const SpoilerScript& script, const GameState& state, const DuplicatorScript* duplicator) {
  RunOutcome out;
  Trace& trace = out.trace;
  trace.variant = state.variant;
  Live l;
  for (int s = 0; s < 2; ++s) {
    const std::vector<Board>& boards = state.side(static_cast<Side>(s));
    for (std::size_t i = 0; i < boards.size(); ++i) {
      std::string id = std::string(1, sideChar(static_cast<Side>(s))) + std::to_string(i + 1);
      std::vector<Selection> hist;
      for (int k = 0; k < boards[i].length(); ++k) hist.push_back(boards[i].at(k));
      trace.initial.push_back({static_cast<Side>(s), id, boards[i].base().describe(), hist});
      l.id[s].push_back(id);
      l.side[s].push_back(boards[i]);
    }
  }
  const int rounds = state.roundsLeft;
  const int scripted = duplicator ? duplicator->scriptedRounds : 0;
  PairFilter filter;
  if (duplicator && scripted == 0) filter = duplicator->pact(state);
  rebuild(l, allPairs(l), filter);
  out.peakBoards = l.boards();

  for (int round = 0; round < rounds && !l.finished(); ++round) {
    MatchView v;
    v.round = round;
    v.rounds = rounds;
    v.variant = state.variant;
    v.side[0] = &l.side[0];
    v.side[1] = &l.side[1];
    v.adj[0] = &l.adj[0];
    v.adj[1] = &l.adj[1];
    v.filter = filter;
    const SpoilerMove mv = script.move(v);
    const int x = index(mv.side), y = 1 - x;
    checkMove(script.name, state, round, l.side[x], mv);

    std::vector<std::vector<Selection>> replies;
    if (duplicator && round < scripted) {
      replies = duplicatorReplies(*duplicator, stateOf(l, rounds - round, state, round), mv);
    } else {
      for (const Board& b : l.side[y]) {
        std::vector<Selection> all;
        for (int t = 0; t < b.candidateCount(); ++t) all.push_back(b.candidate(t));
        replies.push_back(std::move(all));
      }
    }

    Live next;
    for (std::size_t i = 0; i < l.side[x].size(); ++i) {
      next.id[x].push_back(l.id[x][i]);
      next.side[x].push_back(extend(l.side[x][i], mv.selections[i]));
      trace.lines.push_back({round + 1, mv.side, l.id[x][i], mv.selections[i]});
    }
    std::vector<int> parent;
    std::vector<Selection> copySel;
    for (std::size_t j = 0; j < l.side[y].size(); ++j) {
      std::vector<CanonicalKey> seen;
      for (Selection t : replies[j]) {
        Board nb = extend(l.side[y][j], t);
        CanonicalKey key = canonical_key(nb);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(std::move(key));
        next.id[y].push_back(l.id[y][j] + "." + t.token());
        next.side[y].push_back(std::move(nb));
        parent.push_back(static_cast<int>(j));
        copySel.push_back(t);
      }
    }
    // Candidate pairs: children of pairs that were alive.
    std::vector<std::vector<int>> childrenOf(l.side[y].size());
    for (std::size_t c = 0; c < parent.size(); ++c) childrenOf[parent[c]].push_back(static_cast<int>(c));
    std::vector<std::vector<int>> candA(next.side[0].size());
    if (x == 0) {
      for (std::size_t i = 0; i < l.side[0].size(); ++i)
        for (int j : l.adj[0][i]) candA[i].insert(candA[i].end(), childrenOf[j].begin(), childrenOf[j].end());
    } else {
      for (std::size_t c = 0; c < parent.size(); ++c) candA[c] = l.adj[0][parent[c]];
    }
    for (auto& row : candA) std::sort(row.begin(), row.end());

    if (duplicator && round + 1 == scripted) {
      Live probe = next;
      rebuild(probe, candA, {});
      filter = duplicator->pact(stateOf(probe, rounds - round - 1, state, round + 1));
    }
    const std::vector<std::string> copyIds = next.id[y];
    const std::vector<char> keptCopy = rebuild(next, candA, filter)[y];
    for (std::size_t c = 0; c < copyIds.size(); ++c)
      if (keptCopy[c]) trace.lines.push_back({round + 1, other(mv.side), copyIds[c], copySel[c]});
    l = std::move(next);
    out.peakBoards = std::max(out.peakBoards, l.boards());
  }
  out.spoilerWins = l.finished();
  trace.result = out.spoilerWins ? "spoiler" : "duplicator";
  return out;
}

namespace {

class Certifier {
 public:
  Certifier(const DuplicatorScript& d, const GameState& s, const Budget& b) : d_(d), state_(s), budget_(b), meter_(b) {}

  // Spoiler refutation of the script from this point, if any.
  std::optional<SpoilerCertificate> explore(const std::vector<Board>& a, const std::vector<Board>& b, int round,
                                            std::vector<RoundPlan>& plans) {
    meter_.tick();
    if (a.empty() || b.empty()) return SpoilerCertificate{plans};
    const int left = state_.roundsLeft - round;
    if (left == 0) return std::nullopt;
    if (round >= d_.scriptedRounds) {
      ++branches_;
      GameState rest = restState(a, b, round);
      MsOptions opt;
      opt.budget = remaining();
      opt.filter = d_.pact(rest);
      MsVerdict v = ms_winner(rest, opt);
      solverNodes_ += v.nodes;
      if (v.winner == Player::Duplicator) return std::nullopt;
      SpoilerCertificate cert{plans};
      for (auto& p : v.certificate->rounds) cert.rounds.push_back(std::move(p));
      return cert;
    }
    for (Side xs : {Side::A, Side::B}) {
      if (!allows(state_.constraintAt(round), xs)) continue;
      const std::vector<Board>& mover = xs == Side::A ? a : b;
      std::vector<std::vector<Selection>> legal;
      bool available = true;
      for (const Board& x : mover) {
        legal.push_back(legal_selections(x, state_.variant));
        available &= !legal.back().empty();
      }
      if (!available) continue;
      std::vector<std::size_t> pick(mover.size(), 0);
      while (true) {
        SpoilerMove mv{xs, {}};
        for (std::size_t i = 0; i < mover.size(); ++i) mv.selections.push_back(legal[i][pick[i]]);
        GameState before = restState(a, b, round);
        std::vector<std::vector<Selection>> replies = duplicatorReplies(d_, before, mv);
        std::vector<Board> nx, ny;
        for (std::size_t i = 0; i < mover.size(); ++i) nx.push_back(extend(mover[i], mv.selections[i]));
        const std::vector<Board>& ys = xs == Side::A ? b : a;
        for (std::size_t j = 0; j < ys.size(); ++j)
          for (Selection t : replies[j]) ny.push_back(extend(ys[j], t));
        std::vector<Board>& na = xs == Side::A ? nx : ny;
        std::vector<Board>& nb = xs == Side::A ? ny : nx;
        prune(na, nb);
        plans.push_back(planOf(xs, mover, mv.selections));
        auto ref = explore(na, nb, round + 1, plans);
        plans.pop_back();
        if (ref) return ref;
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == legal[i].size()) pick[i++] = 0;
        if (i == pick.size()) break;
      }
    }
    return std::nullopt;
  }

  std::uint64_t nodes() const { return meter_.nodes() + solverNodes_; }
  std::uint64_t millis() const { return meter_.elapsedMillis(); }
  std::size_t branches() const { return branches_; }

 private:
  GameState restState(const std::vector<Board>& a, const std::vector<Board>& b, int round) const {
    GameState s;
    s.sideA = a;
    s.sideB = b;
    s.roundsLeft = state_.roundsLeft - round;
    for (int i = round; i < static_cast<int>(state_.constraints.size()); ++i)
      s.constraints.push_back(state_.constraints[i]);
    s.variant = state_.variant;
    return s;
  }

  static void prune(std::vector<Board>& a, std::vector<Board>& b) {
    std::vector<char> ka(a.size(), 0), kb(b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (partial_iso(a[i], b[j])) ka[i] = kb[j] = 1;
    auto keep = [](std::vector<Board>& v, const std::vector<char>& k) {
      std::vector<Board> out;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (k[i]) out.push_back(v[i]);
      v = std::move(out);
    };
    keep(a, ka);
    keep(b, kb);
  }

  Budget remaining() const {
    Budget r;
    const std::uint64_t used = nodes(), ms = millis();
    if (budget_.maxNodes) {
      if (used >= budget_.maxNodes) throw BudgetExceeded("node budget exhausted during certification");
      r.maxNodes = budget_.maxNodes - used;
    }
    if (budget_.maxMillis) {
      if (ms >= budget_.maxMillis) throw BudgetExceeded("time budget exhausted during certification");
      r.maxMillis = budget_.maxMillis - ms;
    }
    return r;
  }

  const DuplicatorScript& d_;
  const GameState& state_;
  Budget budget_;
  BudgetMeter meter_;
  std::uint64_t solverNodes_ = 0;
  std::size_t branches_ = 0;
};

}  // namespace

CertifyOutcome certify_duplicator(const DuplicatorScript& script, const GameState& state, const Budget& budget,
                                  const std::vector<SpoilerScript>& preferred) {
  Certifier c(script, state, budget);
  std::vector<Board> a = state.sideA, b = state.sideB;
  std::vector<RoundPlan> plans;
  std::optional<SpoilerCertificate> ref = c.explore(a, b, 0, plans);
  CertifyOutcome out;
  out.certified = !ref.has_value();
  out.nodes = c.nodes();
  out.millis = c.millis();
  out.branches = c.branches();
  if (ref) {
    for (const SpoilerScript& p : preferred) {
      try {
        RunOutcome run = run_spoiler(p, state, &script);
        if (!run.spoilerWins) continue;
        out.refutationTrace = std::move(run.trace);
        out.refutedBy = p.name;
        break;
      } catch (const ScriptDefect&) {
      }
    }
    if (!out.refutationTrace) {
      out.refutationTrace = run_spoiler(certificate_script(*ref), state, &script).trace;
      out.refutedBy = "certificate";
    }
    out.refutation = std::move(ref);
  }
  return out;
}

LadderReport ladder(const DuplicatorScript& script, int from, int to, int rounds, Variant variant,
                    const Budget& budget) {
  if (from < 1 || to <= from) throw UsageError("ladder needs 1 <= from < to");
  LadderReport rep;
  rep.from = from;
  rep.to = to;
  rep.rounds = rounds;
  for (int k = from; k < to; ++k) {
    GameState s = GameState::make({make_linear_order(k + 1)}, {make_linear_order(k)}, rounds, variant);
    CertifyOutcome c = certify_duplicator(script, s, budget);
    rep.steps.push_back({k, c.certified, c.nodes});
  }
  rep.complete = std::all_of(rep.steps.begin(), rep.steps.end(), [](const LadderStep& s) { return s.certified; });
  // Sizes joined by a run of certified adjacent steps are equivalent.
  for (int p = from; p <= to; ++p)
    for (int q = p + 1; q <= to; ++q) {
      bool chained = true;
      for (int k = p; k < q; ++k) chained &= rep.steps[k - from].certified;
      if (chained) rep.implied.emplace_back(p, q);
    }
  return rep;
}

}  // namespace msgames
