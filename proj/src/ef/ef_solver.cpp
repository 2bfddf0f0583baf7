#include "msgames/ef_solver.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

namespace msgames {

namespace {

using Gaps = std::vector<int>;

// Process-wide memo for positions; entries are write-once facts.
class Memo {
 public:
  std::optional<bool> find(const std::string& key) {
    std::lock_guard lock(mu_);
    auto it = table_.find(key);
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }
  void store(const std::string& key, bool value) {
    std::lock_guard lock(mu_);
    table_.emplace(key, value);
  }

 private:
  std::mutex mu_;
  std::unordered_map<std::string, bool> table_;
};

Memo& gapMemo() {
  static Memo memo;
  return memo;
}

Memo& genericMemo() {
  static Memo memo;
  return memo;
}

bool plainLinear(const Board& b) { return b.isLinearOrder() && b.atomLedger() == 0; }

// Distinct selected positions in increasing order.
std::vector<int> selectedPoints(const Board& b) {
  std::vector<int> pts;
  for (int i = 0; i < b.length(); ++i) pts.push_back(b.at(i).index());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

Gaps gapsOf(const Board& b) {
  std::vector<int> pts = selectedPoints(b);
  Gaps g;
  int prev = -1;
  for (int p : pts) {
    g.push_back(p - prev - 1);
    prev = p;
  }
  g.push_back(b.base().size() - 1 - prev);
  return g;
}

int gapStart(const Board& b, int gap) {
  std::vector<int> pts = selectedPoints(b);
  return gap == 0 ? 0 : pts[gap - 1] + 1;
}

// Offsets from the middle outwards.
std::vector<int> middleFirst(int size) {
  std::vector<int> out;
  int mid = (size - 1) / 2;
  for (int d = 0; static_cast<int>(out.size()) < size; ++d) {
    if (mid - d >= 0) out.push_back(mid - d);
    if (d > 0 && mid + d < size) out.push_back(mid + d);
  }
  return out;
}

// Replies ordered by how closely they copy the split (o, s-1-o).
std::vector<int> mirrorFirst(int o, int s, int t) {
  std::vector<int> out(t);
  for (int i = 0; i < t; ++i) out[i] = i;
  auto cost = [&](int x) { return std::min(std::abs(x - o), std::abs((t - 1 - x) - (s - 1 - o))); };
  std::stable_sort(out.begin(), out.end(), [&](int x, int y) { return cost(x) < cost(y); });
  return out;
}

Gaps split(const Gaps& g, int i, int o) {
  Gaps out;
  out.reserve(g.size() + 1);
  out.insert(out.end(), g.begin(), g.begin() + i);
  out.push_back(o);
  out.push_back(g[i] - 1 - o);
  out.insert(out.end(), g.begin() + i + 1, g.end());
  return out;
}

class GapSearch {
 public:
  GapSearch(const std::vector<SideConstraint>& constraints, BudgetMeter& meter)
      : c_(constraints), meter_(meter) {}

  SideConstraint constraintAt(int round) const {
    return round < static_cast<int>(c_.size()) ? c_[round] : SideConstraint::Free;
  }

  // Spoiler to move at `round` with k rounds left; the position is alive.
  bool win(const Gaps& ga, const Gaps& gb, int k, int round) {
    meter_.tick();
    if (k == 0) return false;
    const SideConstraint c = constraintAt(round);
    for (std::size_t i = 0; i < ga.size(); ++i) {
      if (allows(c, Side::A) && ga[i] > 0 && gb[i] == 0) return true;
      if (allows(c, Side::B) && gb[i] > 0 && ga[i] == 0) return true;
    }
    if (k == 1) return false;
    std::string key = memoKey(ga, gb, k, round);
    if (auto hit = gapMemo().find(key)) return *hit;
    bool result = false;
    for (Side side : {Side::A, Side::B}) {
      if (!allows(c, side) || result) continue;
      result = findMove(side, ga, gb, k, round).first != -1;
    }
    gapMemo().store(key, result);
    return result;
  }

  static constexpr int kReplay = -2;

  // Winning (gap, offset) for Spoiler on `side`, (kReplay, 0) for
  // reselecting an element, or (-1, -1).
  std::pair<int, int> findMove(Side side, const Gaps& ga, const Gaps& gb, int k, int round) {
    const Gaps& x = side == Side::A ? ga : gb;
    const Gaps& y = side == Side::A ? gb : ga;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] > 0 && y[i] == 0) return {static_cast<int>(i), (x[i] - 1) / 2};
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) continue;
      for (int o : middleFirst(x[i])) {
        Gaps nx = split(x, static_cast<int>(i), o);
        bool all = true;
        for (int t : mirrorFirst(o, x[i], y[i])) {
          Gaps ny = split(y, static_cast<int>(i), t);
          bool w = side == Side::A ? win(nx, ny, k - 1, round + 1) : win(ny, nx, k - 1, round + 1);
          if (!w) {
            all = false;
            break;
          }
        }
        if (all) return {static_cast<int>(i), o};
      }
    }
    // Reselecting a chosen element spends a round without changing the gaps,
    // which matters when the next rounds are forced onto particular sides.
    if (x.size() > 1 && win(ga, gb, k - 1, round + 1)) return {kReplay, 0};
    return {-1, -1};
  }

 private:
  std::string memoKey(const Gaps& ga, const Gaps& gb, int k, int round) const {
    auto encode = [&](bool reversed) {
      std::string s;
      s.push_back(static_cast<char>(k));
      for (int r = round; r < round + k; ++r) s.push_back(static_cast<char>(constraintAt(r)));
      auto put = [&](int v) {
        s.push_back(static_cast<char>(v & 0xff));
        s.push_back(static_cast<char>((v >> 8) & 0xff));
      };
      for (const Gaps* g : {&ga, &gb}) {
        put(static_cast<int>(g->size()));
        if (reversed) {
          for (auto it = g->rbegin(); it != g->rend(); ++it) put(*it);
        } else {
          for (int v : *g) put(v);
        }
      }
      return s;
    };
    return std::min(encode(false), encode(true));
  }

  const std::vector<SideConstraint>& c_;
  BudgetMeter& meter_;
};

class GenericSearch {
 public:
  GenericSearch(const std::vector<SideConstraint>& constraints, BudgetMeter& meter)
      : c_(constraints), meter_(meter) {}

  SideConstraint constraintAt(int round) const {
    return round < static_cast<int>(c_.size()) ? c_[round] : SideConstraint::Free;
  }

  bool win(const Board& a, const Board& b, int k, int round) {
    meter_.tick();
    if (!partial_iso(a, b)) return true;
    if (k == 0) return false;
    std::string key = canonical_key(a) + '\x1f' + canonical_key(b) + '\x1f' + char(k);
    for (int r = round; r < round + k; ++r) key.push_back(static_cast<char>(constraintAt(r)));
    if (auto hit = genericMemo().find(key)) return *hit;
    bool result = false;
    for (Side side : {Side::A, Side::B})
      if (!result && allows(constraintAt(round), side))
        result = findMove(side, a, b, k, round).has_value();
    genericMemo().store(key, result);
    return result;
  }

  std::optional<Selection> findMove(Side side, const Board& a, const Board& b, int k, int round) {
    const Board& x = side == Side::A ? a : b;
    const Board& y = side == Side::A ? b : a;
    for (int sc = 0; sc < x.candidateCount(); ++sc) {
      Board nx = extend(x, x.candidate(sc));
      bool all = true;
      for (int tc = 0; tc < y.candidateCount() && all; ++tc) {
        Board ny = extend(y, y.candidate(tc));
        all = side == Side::A ? win(nx, ny, k - 1, round + 1) : win(ny, nx, k - 1, round + 1);
      }
      if (all) return x.candidate(sc);
    }
    return std::nullopt;
  }

 private:
  const std::vector<SideConstraint>& c_;
  BudgetMeter& meter_;
};

class Solver {
 public:
  Solver(const std::vector<SideConstraint>& constraints, const Budget& budget)
      : c_(constraints), meter_(budget), gaps_(c_, meter_), generic_(c_, meter_) {}

  bool win(const Board& a, const Board& b, int k, int round) {
    if (!partial_iso(a, b)) return true;
    if (plainLinear(a) && plainLinear(b)) return gaps_.win(gapsOf(a), gapsOf(b), k, round);
    return generic_.win(a, b, k, round);
  }

  std::unique_ptr<EfStrategy> build(const Board& a, const Board& b, int k, int round) {
    auto node = std::make_unique<EfStrategy>();
    if (!partial_iso(a, b)) return node;
    for (Side side : {Side::A, Side::B}) {
      if (!allows(gaps_.constraintAt(round), side)) continue;
      std::optional<Selection> move;
      if (plainLinear(a) && plainLinear(b)) {
        auto [gap, off] = gaps_.findMove(side, gapsOf(a), gapsOf(b), k, round);
        if (gap >= 0) move = Selection::element(gapStart(side == Side::A ? a : b, gap) + off);
        if (gap == GapSearch::kReplay) move = (side == Side::A ? a : b).at(0);
      } else {
        move = generic_.findMove(side, a, b, k, round);
      }
      if (!move) continue;
      node->leaf = false;
      node->side = side;
      node->move = *move;
      const Board& x = side == Side::A ? a : b;
      const Board& y = side == Side::A ? b : a;
      Board nx = extend(x, *move);
      for (int tc = 0; tc < y.candidateCount(); ++tc) {
        Board ny = extend(y, y.candidate(tc));
        auto child = side == Side::A ? build(nx, ny, k - 1, round + 1) : build(ny, nx, k - 1, round + 1);
        node->branches.push_back({y.candidate(tc), std::move(child)});
      }
      return node;
    }
    throw std::logic_error("witness requested for a Duplicator win");
  }

  std::uint64_t nodes() const { return meter_.nodes(); }

 private:
  const std::vector<SideConstraint>& c_;
  BudgetMeter meter_;
  GapSearch gaps_;
  GenericSearch generic_;
};

EfVerdict solve(const Board& a, const Board& b, int rounds, const std::vector<SideConstraint>& c,
                const EfOptions& options) {
  if (rounds < 0) throw UsageError("rounds must be non-negative");
  if (a.length() != b.length()) throw UsageError("boards have different history lengths");
  if (a.length() + rounds > Board::kMaxHistory) throw UsageError("too many rounds");
  Solver solver(c, options.budget);
  EfVerdict v;
  bool spoiler = solver.win(a, b, rounds, 0);
  v.winner = spoiler ? Player::Spoiler : Player::Duplicator;
  if (spoiler && options.witness) v.witness = solver.build(a, b, rounds, 0);
  v.nodes = solver.nodes();
  return v;
}

bool checkNode(const Board& a, const Board& b, const std::vector<SideConstraint>& c, int round,
               int k, const EfStrategy& node) {
  if (!partial_iso(a, b)) return true;
  if (node.leaf || k == 0) return false;
  SideConstraint sc = round < static_cast<int>(c.size()) ? c[round] : SideConstraint::Free;
  if (!allows(sc, node.side)) return false;
  const Board& x = node.side == Side::A ? a : b;
  const Board& y = node.side == Side::A ? b : a;
  if (!x.validSelection(node.move)) return false;
  Board nx = extend(x, node.move);
  for (int tc = 0; tc < y.candidateCount(); ++tc) {
    Selection t = y.candidate(tc);
    auto it = std::find_if(node.branches.begin(), node.branches.end(),
                           [&](const EfStrategy::Branch& br) { return br.reply == t; });
    if (it == node.branches.end() || !it->next) return false;
    Board ny = extend(y, t);
    bool ok = node.side == Side::A ? checkNode(nx, ny, c, round + 1, k - 1, *it->next)
                                   : checkNode(ny, nx, c, round + 1, k - 1, *it->next);
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::size_t EfStrategy::leafCount() const {
  if (leaf) return 1;
  std::size_t n = 0;
  for (const auto& br : branches) n += br.next->leafCount();
  return n;
}

EfVerdict ef_winner(const Board& a, const Board& b, int rounds, const EfOptions& options) {
  return solve(a, b, rounds, {}, options);
}

EfVerdict ef_prefix_winner(const Board& a, const Board& b, const std::vector<SideConstraint>& prefix,
                           const EfOptions& options) {
  if (prefix.empty()) throw UsageError("prefix must be non-empty");
  return solve(a, b, static_cast<int>(prefix.size()), prefix, options);
}

bool check_ef_witness(const Board& a, const Board& b, const std::vector<SideConstraint>& constraints,
                      int rounds, const EfStrategy& witness) {
  return checkNode(a, b, constraints, 0, rounds, witness);
}

}  // namespace msgames
