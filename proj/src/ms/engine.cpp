#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "msgames/ms_engine.hpp"

namespace msgames {

namespace {

class SharedMemo {
 public:
  std::optional<bool> find(const std::string& key) {
    std::lock_guard lock(mu_);
    auto it = table_.find(key);
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }
  void store(const std::string& key, bool value) {
    std::lock_guard lock(mu_);
    if (table_.size() > 4'000'000) table_.clear();
    table_.emplace(key, value);
  }

 private:
  std::mutex mu_;
  std::unordered_map<std::string, bool> table_;
};

SharedMemo& sharedMemo() {
  static SharedMemo memo;
  return memo;
}

// Distinct selected element positions of a board, increasing.
int sortedPoints(const Board& b, int* out) {
  int d = 0;
  for (int i = 0; i < b.length(); ++i) {
    int c = b.at(i).code();
    if (c >= 0) out[d++] = c;
  }
  std::sort(out, out + d);
  return static_cast<int>(std::unique(out, out + d) - out);
}

}  // namespace

Mask Mask::upTo(int n) {
  Mask m;
  for (int i = 0; i < n; ++i) m.set(i);
  return m;
}

int Mask::first() const {
  if (w[0]) return __builtin_ctzll(w[0]);
  if (w[1]) return 64 + __builtin_ctzll(w[1]);
  return -1;
}

std::size_t Position::pairCount() const {
  std::size_t n = 0;
  for (const auto& a : adj[0]) n += a.size();
  return n;
}

Engine::Engine(Variant variant, std::vector<SideConstraint> constraints, const Budget& budget,
               PairFilter filter)
    : variant_(variant), constraints_(std::move(constraints)), meter_(budget),
      filter_(std::move(filter)), fast_(!filter_) {}

SideConstraint Engine::constraintAt(int round) const {
  return round < static_cast<int>(constraints_.size()) ? constraints_[round] : SideConstraint::Free;
}

bool Engine::alive(const Board& a, const Board& b) const {
  if (!partial_iso(a, b)) return false;
  return !filter_ || filter_(a, b);
}

Mask Engine::legalMask(const Board& b) const {
  const int cc = b.candidateCount();
  if (cc > Mask::kBits) throw UsageError("board has too many candidate selections for the MS solver");
  Mask m = Mask::upTo(cc);
  if (variant_.noPlayOnTop)
    for (int i = 0; i < b.length(); ++i)
      if (!b.at(i).isAtom()) m.reset(b.at(i).index());
  return m;
}

bool Engine::sideAvailable(const Position& p, Side s) const {
  if (!variant_.noPlayOnTop) return true;
  for (const Board& b : p.side[index(s)])
    if (!legalMask(b).any()) return false;
  return true;
}

Mask Engine::killMask(const Board& mover, Side moverSide, const Board& other) const {
  Mask m;
  if (fast_ && mover.isLinearOrder() && other.isLinearOrder()) {
    int pm[Board::kMaxHistory], po[Board::kMaxHistory];
    const int d = sortedPoints(mover, pm);
    sortedPoints(other, po);
    const int nm = mover.base().size(), no = other.base().size();
    for (int g = 0; g <= d; ++g) {
      int mlo = g == 0 ? 0 : pm[g - 1] + 1, mhi = g == d ? nm - 1 : pm[g] - 1;
      int olo = g == 0 ? 0 : po[g - 1] + 1, ohi = g == d ? no - 1 : po[g] - 1;
      if (mlo <= mhi && olo > ohi)
        for (int e = mlo; e <= mhi; ++e) m.set(e);
    }
    return m;
  }
  for (int s = 0; s < mover.candidateCount(); ++s) {
    Board ms = extend(mover, mover.candidate(s));
    bool kills = true;
    for (int t = 0; t < other.candidateCount() && kills; ++t) {
      Board ot = extend(other, other.candidate(t));
      kills = !(moverSide == Side::A ? alive(ms, ot) : alive(ot, ms));
    }
    if (kills) m.set(s);
  }
  return m;
}

void Engine::replies(const Board& x, Side xSide, int s, const Board& y, std::vector<int>& out) const {
  out.clear();
  if (fast_ && x.isLinearOrder() && y.isLinearOrder()) {
    const int nx = x.base().size(), ny = y.base().size();
    if (s >= nx) {  // atom ids are shared by alive partners
      out.push_back(ny + (s - nx));
      return;
    }
    for (int i = 0; i < x.length(); ++i)
      if (x.at(i).code() == s) {
        out.push_back(y.at(i).index());
        return;
      }
    int px[Board::kMaxHistory], py[Board::kMaxHistory];
    const int d = sortedPoints(x, px);
    sortedPoints(y, py);
    int g = static_cast<int>(std::lower_bound(px, px + d, s) - px);
    int lo = g == 0 ? 0 : py[g - 1] + 1, hi = g == d ? ny - 1 : py[g] - 1;
    for (int e = lo; e <= hi; ++e) out.push_back(e);
    return;
  }
  Board xs = extend(x, x.candidate(s));
  for (int t = 0; t < y.candidateCount(); ++t) {
    Board yt = extend(y, y.candidate(t));
    if (xSide == Side::A ? alive(xs, yt) : alive(yt, xs)) out.push_back(t);
  }
}

Position Engine::makePosition(std::vector<Board> a, std::vector<Board> b) const {
  Position p;
  std::vector<Board>* in[2] = {&a, &b};
  std::vector<std::vector<int>> adjA(a.size());
  std::vector<char> usedB(b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (alive(a[i], b[j])) {
        adjA[i].push_back(static_cast<int>(j));
        usedB[j] = 1;
      }
  std::vector<int> remapB(b.size(), -1);
  for (std::size_t j = 0; j < b.size(); ++j)
    if (usedB[j]) {
      remapB[j] = static_cast<int>(p.side[1].size());
      p.side[1].push_back((*in[1])[j]);
    }
  p.adj[1].resize(p.side[1].size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (adjA[i].empty()) continue;
    int ni = static_cast<int>(p.side[0].size());
    p.side[0].push_back((*in[0])[i]);
    std::vector<int> row;
    for (int j : adjA[i]) {
      row.push_back(remapB[j]);
      p.adj[1][remapB[j]].push_back(ni);
    }
    p.adj[0].push_back(std::move(row));
  }
  return p;
}

namespace {

// Drops boards on side s with no partners and renumbers adjacency.
void pruneSide(Position& p, int s) {
  const int o = 1 - s;
  if (std::none_of(p.adj[s].begin(), p.adj[s].end(), [](const auto& row) { return row.empty(); }))
    return;
  std::vector<int> remap(p.side[s].size(), -1);
  std::vector<Board> boards;
  std::vector<std::vector<int>> adj;
  for (std::size_t i = 0; i < p.side[s].size(); ++i) {
    if (p.adj[s][i].empty()) continue;
    remap[i] = static_cast<int>(boards.size());
    boards.push_back(std::move(p.side[s][i]));
    adj.push_back(std::move(p.adj[s][i]));
  }
  p.side[s] = std::move(boards);
  p.adj[s] = std::move(adj);
  for (auto& row : p.adj[o])
    for (int& v : row) v = remap[v];
}

}  // namespace

Position Engine::advance(const Position& p, Side side, const std::vector<int>& choice) const {
  const int x = index(side), y = 1 - x;
  Position c;
  c.side[x].reserve(p.side[x].size());
  for (std::size_t i = 0; i < p.side[x].size(); ++i)
    c.side[x].push_back(extend(p.side[x][i], p.side[x][i].candidate(choice[i])));
  c.adj[x].resize(c.side[x].size());
  std::vector<int> ts, slot;
  for (std::size_t j = 0; j < p.side[y].size(); ++j) {
    const Board& yb = p.side[y][j];
    slot.assign(yb.candidateCount(), -1);
    const bool general = !(fast_ && yb.isLinearOrder());
    std::vector<std::pair<CanonicalKey, int>> seen;
    for (int i : p.adj[y][j]) {
      replies(p.side[x][i], side, choice[i], yb, ts);
      for (int t : ts) {
        if (slot[t] == -1) {
          Board nb = extend(yb, yb.candidate(t));
          if (general) {
            CanonicalKey k = canonical_key(nb);
            auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& e) { return e.first == k; });
            if (it != seen.end()) {
              slot[t] = -2 - it->second;
            } else {
              seen.emplace_back(std::move(k), static_cast<int>(c.side[y].size()));
            }
          }
          if (slot[t] == -1) {
            slot[t] = static_cast<int>(c.side[y].size());
            c.side[y].push_back(std::move(nb));
            c.adj[y].emplace_back();
          }
        }
        if (slot[t] < 0) continue;  // isomorphic to an earlier copy with identical edges
        c.adj[y][slot[t]].push_back(i);
        c.adj[x][i].push_back(slot[t]);
      }
    }
  }
  pruneSide(c, x);
  return c;
}

Position Engine::advanceScripted(const Position& p, Side side, const std::vector<int>& choice,
                                 const std::vector<std::vector<int>>& replyLists) const {
  const int x = index(side), y = 1 - x;
  std::vector<Board> xs, ys;
  for (std::size_t i = 0; i < p.side[x].size(); ++i)
    xs.push_back(extend(p.side[x][i], p.side[x][i].candidate(choice[i])));
  std::vector<std::vector<int>> parentsOf;
  for (std::size_t j = 0; j < p.side[y].size(); ++j) {
    std::vector<CanonicalKey> seen;
    for (int t : replyLists[j]) {
      Board nb = extend(p.side[y][j], p.side[y][j].candidate(t));
      CanonicalKey k = canonical_key(nb);
      if (std::find(seen.begin(), seen.end(), k) != seen.end()) continue;
      seen.push_back(std::move(k));
      ys.push_back(std::move(nb));
      parentsOf.push_back(p.adj[y][j]);
    }
  }
  Position c;
  c.side[x] = std::move(xs);
  c.side[y] = std::move(ys);
  c.adj[x].resize(c.side[x].size());
  c.adj[y].resize(c.side[y].size());
  for (std::size_t j = 0; j < c.side[y].size(); ++j)
    for (int i : parentsOf[j]) {
      bool ok = side == Side::A ? alive(c.side[x][i], c.side[y][j]) : alive(c.side[y][j], c.side[x][i]);
      if (!ok) continue;
      c.adj[y][j].push_back(i);
      c.adj[x][i].push_back(static_cast<int>(j));
    }
  pruneSide(c, y);
  pruneSide(c, x);
  return c;
}

std::optional<std::vector<int>> Engine::lastRound(const Position& p, Side xs) const {
  const int x = index(xs), y = 1 - x;
  std::vector<int> choice(p.side[x].size());
  for (std::size_t i = 0; i < p.side[x].size(); ++i) {
    Mask m = legalMask(p.side[x][i]);
    for (int j : p.adj[x][i]) {
      if (!m.any()) break;
      m &= killMask(p.side[x][i], xs, p.side[y][j]);
    }
    if (!m.any()) return std::nullopt;
    choice[i] = m.first();
  }
  return choice;
}

std::optional<std::vector<int>> Engine::twoRoundSame(const Position& p, Side xs) const {
  const int x = index(xs), y = 1 - x;
  std::vector<int> choice(p.side[x].size());
  std::vector<int> ts;
  for (std::size_t i = 0; i < p.side[x].size(); ++i) {
    const Board& xb = p.side[x][i];
    Mask legal = legalMask(xb);
    bool found = false;
    for (int s = legal.first(); s >= 0 && !found; ) {
      Board xn = extend(xb, xb.candidate(s));
      Mask m = legalMask(xn);
      bool partners = false;
      for (int j : p.adj[x][i]) {
        replies(xb, xs, s, p.side[y][j], ts);
        for (int t : ts) {
          partners = true;
          m &= killMask(xn, xs, extend(p.side[y][j], p.side[y][j].candidate(t)));
          if (!m.any()) break;
        }
        if (!m.any()) break;
      }
      if (!partners || m.any()) {
        choice[i] = s;
        found = true;
      }
      legal.reset(s);
      s = legal.first();
    }
    if (!found) return std::nullopt;
  }
  return choice;
}

namespace {

// Backtracking search for a per-board choice such that every touched reply
// board keeps a non-empty set of killing selections.
class SwitchCsp {
 public:
  struct Entry {
    int slot;
    Mask kill;
  };
  struct Value {
    int choice;
    std::vector<Entry> entries;
  };

  SwitchCsp(std::vector<std::vector<Value>> domains, int slots, BudgetMeter& meter)
      : dom_(std::move(domains)), cur_(slots, full()), assigned_(dom_.size(), -1), meter_(meter) {}

  std::optional<std::vector<int>> solve() {
    for (const auto& d : dom_)
      if (d.empty()) return std::nullopt;
    if (!search(0)) return std::nullopt;
    std::vector<int> out(dom_.size());
    for (std::size_t i = 0; i < dom_.size(); ++i) out[i] = dom_[i][assigned_[i]].choice;
    return out;
  }

 private:
  static Mask full() {
    Mask m;
    m.w[0] = m.w[1] = ~0ULL;
    return m;
  }

  bool consistent(const Value& v) const {
    for (const auto& e : v.entries)
      if (!(cur_[e.slot] & e.kill).any()) return false;
    return true;
  }

  bool search(std::size_t depth) {
    meter_.tick();
    if (depth == dom_.size()) return true;
    int best = -1;
    std::size_t bestCount = 0;
    for (std::size_t i = 0; i < dom_.size(); ++i) {
      if (assigned_[i] >= 0) continue;
      std::size_t count = 0;
      for (const auto& v : dom_[i]) count += consistent(v);
      if (count == 0) return false;
      if (best < 0 || count < bestCount) {
        best = static_cast<int>(i);
        bestCount = count;
      }
    }
    for (std::size_t vi = 0; vi < dom_[best].size(); ++vi) {
      const Value& v = dom_[best][vi];
      if (!consistent(v)) continue;
      std::vector<std::pair<int, Mask>> undo;
      undo.reserve(v.entries.size());
      for (const auto& e : v.entries) {
        undo.emplace_back(e.slot, cur_[e.slot]);
        cur_[e.slot] &= e.kill;
      }
      assigned_[best] = static_cast<int>(vi);
      if (search(depth + 1)) return true;
      assigned_[best] = -1;
      for (auto it = undo.rbegin(); it != undo.rend(); ++it) cur_[it->first] = it->second;
    }
    return false;
  }

  std::vector<std::vector<Value>> dom_;
  std::vector<Mask> cur_;
  std::vector<int> assigned_;
  BudgetMeter& meter_;
};

}  // namespace

std::optional<std::vector<int>> Engine::twoRoundSwitch(const Position& p, Side xs) {
  const int x = index(xs), y = 1 - x;
  const Side ys = other(xs);
  std::vector<int> base(p.side[y].size() + 1, 0);
  for (std::size_t j = 0; j < p.side[y].size(); ++j)
    base[j + 1] = base[j] + p.side[y][j].candidateCount();
  std::vector<std::vector<SwitchCsp::Value>> domains(p.side[x].size());
  std::vector<int> ts;
  for (std::size_t i = 0; i < p.side[x].size(); ++i) {
    const Board& xb = p.side[x][i];
    Mask legal = legalMask(xb);
    for (int s = legal.first(); s >= 0; legal.reset(s), s = legal.first()) {
      meter_.tick();
      Board xn = extend(xb, xb.candidate(s));
      SwitchCsp::Value value{s, {}};
      bool ok = true;
      for (int j : p.adj[x][i]) {
        const Board& yb = p.side[y][j];
        replies(xb, xs, s, yb, ts);
        for (int t : ts) {
          Board yn = extend(yb, yb.candidate(t));
          Mask h = legalMask(yn) & killMask(yn, ys, xn);
          if (!h.any()) {
            ok = false;
            break;
          }
          value.entries.push_back({base[j] + t, h});
        }
        if (!ok) break;
      }
      if (ok) domains[i].push_back(std::move(value));
    }
    if (domains[i].empty()) return std::nullopt;
  }
  return SwitchCsp(std::move(domains), base.back(), meter_).solve();
}

std::optional<std::vector<int>> Engine::deepMove(const Position& p, Side xs, int k, int round) {
  const int x = index(xs);
  const std::size_t count = p.side[x].size();
  std::vector<Mask> legal(count);
  for (std::size_t i = 0; i < count; ++i) legal[i] = legalMask(p.side[x][i]);
  std::vector<int> choice(count, -1);
  std::optional<std::vector<int>> found;
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == count) {
      meter_.tick();
      Position child = advance(p, xs, choice);
      return child.finished() || win(child, k - 1, round + 1);
    }
    Mask m = legal[i];
    for (int s = m.first(); s >= 0; m.reset(s), s = m.first()) {
      choice[i] = s;
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  if (rec(rec, 0)) found = choice;
  return found;
}

bool Engine::linearPosition(const Position& p) const {
  if (!fast_) return false;
  for (int s = 0; s < 2; ++s)
    for (const Board& b : p.side[s])
      if (!b.isLinearOrder()) return false;
  return true;
}

std::string Engine::memoKey(const Position& p, int k, int round) const {
  std::string head;
  head.push_back(static_cast<char>(k));
  for (int r = round; r < round + k; ++r) head.push_back(static_cast<char>(constraintAt(r)));
  head.push_back(static_cast<char>(variant_.atoms | (variant_.noPlayOnTop << 1)));
  auto encode = [&](bool reflected) {
    std::string out = head;
    for (int s = 0; s < 2; ++s) {
      std::vector<CanonicalKey> keys;
      keys.reserve(p.side[s].size());
      for (const Board& b : p.side[s]) keys.push_back(canonical_key(reflected ? reflect(b) : b));
      std::sort(keys.begin(), keys.end());
      out += std::to_string(keys.size());
      out.push_back('#');
      for (const auto& key : keys) {
        out += std::to_string(key.size());
        out.push_back(':');
        out += key;
      }
    }
    return out;
  };
  if (!linearPosition(p)) return encode(false);
  return std::min(encode(false), encode(true));
}

bool Engine::win(const Position& p, int k, int round) {
  meter_.tick();
  if (p.finished()) return true;
  if (k == 0) return false;
  const SideConstraint c = constraintAt(round);
  if (k == 1) {
    for (Side xs : {Side::A, Side::B})
      if (allows(c, xs) && sideAvailable(p, xs) && lastRound(p, xs)) return true;
    return false;
  }
  const std::string key = memoKey(p, k, round);
  if (fast_) {
    if (auto hit = sharedMemo().find(key)) return *hit;
  } else if (auto it = localMemo_.find(key); it != localMemo_.end()) {
    return it->second;
  }
  bool result = false;
  for (Side xs : {Side::A, Side::B}) {
    if (result || !allows(c, xs) || !sideAvailable(p, xs)) continue;
    if (k == 2) {
      const SideConstraint next = constraintAt(round + 1);
      result = (allows(next, xs) && twoRoundSame(p, xs)) ||
               (allows(next, other(xs)) && twoRoundSwitch(p, xs));
    } else {
      result = deepMove(p, xs, k, round).has_value();
    }
  }
  if (fast_) sharedMemo().store(key, result);
  else localMemo_.emplace(key, result);
  return result;
}

RoundPlan Engine::makePlan(Side side, const std::vector<Board>& boards, const std::vector<int>& choice) {
  RoundPlan plan;
  plan.side = side;
  for (std::size_t i = 0; i < boards.size(); ++i) {
    CanonicalForm form = canonical_form(boards[i]);
    plan.moves[form.key] = to_canonical(form, boards[i].candidate(choice[i]));
  }
  return plan;
}

void Engine::certify(const Position& p, int k, int round, SpoilerCertificate& out) {
  if (p.finished()) return;
  if (k == 0) throw std::logic_error("certificate requested for a Duplicator win");
  const SideConstraint c = constraintAt(round);
  for (Side xs : {Side::A, Side::B}) {
    if (!allows(c, xs) || !sideAvailable(p, xs)) continue;
    std::optional<std::vector<int>> choice;
    if (k == 1) {
      choice = lastRound(p, xs);
    } else if (k == 2) {
      const SideConstraint next = constraintAt(round + 1);
      if (allows(next, xs)) choice = twoRoundSame(p, xs);
      if (!choice && allows(next, other(xs))) choice = twoRoundSwitch(p, xs);
    } else {
      choice = deepMove(p, xs, k, round);
    }
    if (!choice) continue;
    out.rounds.push_back(makePlan(xs, p.side[index(xs)], *choice));
    if (k > 1) certify(advance(p, xs, *choice), k - 1, round + 1, out);
    return;
  }
  throw std::logic_error("certificate requested for a Duplicator win");
}

}  // namespace msgames
