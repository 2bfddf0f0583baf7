#pragma once

// Search machinery shared by the MS solver, the strategy lab and the service.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "msgames/ms_solver.hpp"

namespace msgames {

// Bit set over a board's candidate selections (see Board::candidate).
struct Mask {
  static constexpr int kBits = 128;
  std::uint64_t w[2] = {0, 0};

  static Mask upTo(int n);
  void set(int i) { w[i >> 6] |= 1ULL << (i & 63); }
  void reset(int i) { w[i >> 6] &= ~(1ULL << (i & 63)); }
  bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  bool any() const { return (w[0] | w[1]) != 0; }
  int first() const;
  Mask& operator&=(const Mask& o) {
    w[0] &= o.w[0];
    w[1] &= o.w[1];
    return *this;
  }
  friend Mask operator&(Mask a, const Mask& b) { return a &= b; }
  bool operator==(const Mask&) const = default;
};

// Alive boards on both sides plus the alive-pair adjacency.
struct Position {
  std::vector<Board> side[2];
  std::vector<std::vector<int>> adj[2];  // adj[s][i]: indices on the other side

  bool finished() const { return side[0].empty() || side[1].empty(); }
  std::size_t pairCount() const;
};

class Engine {
 public:
  // `constraints` are indexed by round from the position handed to win().
  Engine(Variant variant, std::vector<SideConstraint> constraints, const Budget& budget,
         PairFilter filter = {});

  bool alive(const Board& a, const Board& b) const;
  Position makePosition(std::vector<Board> a, std::vector<Board> b) const;
  // Spoiler plays `choice[i]` (candidate index) on board i of `side`; the other
  // side is expanded obliviously. Dead boards are dropped.
  Position advance(const Position& p, Side side, const std::vector<int>& choice) const;
  // Other side supplied explicitly: replies[j] lists candidate indices for
  // board j of the other side (a scripted Duplicator).
  Position advanceScripted(const Position& p, Side side, const std::vector<int>& choice,
                           const std::vector<std::vector<int>>& replies) const;

  Mask legalMask(const Board& b) const;
  bool sideAvailable(const Position& p, Side s) const;
  SideConstraint constraintAt(int round) const;

  // Spoiler wins from p with k rounds left, starting at `round`.
  bool win(const Position& p, int k, int round);
  // Certificate rounds for a Spoiler win; p must be winning.
  void certify(const Position& p, int k, int round, SpoilerCertificate& out);

  std::uint64_t nodes() const { return meter_.nodes(); }
  BudgetMeter& meter() { return meter_; }
  const Variant& variant() const { return variant_; }

  static RoundPlan makePlan(Side side, const std::vector<Board>& boards, const std::vector<int>& choice);

 private:
  bool fast() const { return fast_; }
  Mask killMask(const Board& mover, Side moverSide, const Board& other) const;
  void replies(const Board& x, Side xSide, int s, const Board& y, std::vector<int>& out) const;
  std::optional<std::vector<int>> lastRound(const Position& p, Side x) const;
  std::optional<std::vector<int>> twoRoundSame(const Position& p, Side x) const;
  std::optional<std::vector<int>> twoRoundSwitch(const Position& p, Side x);
  std::optional<std::vector<int>> deepMove(const Position& p, Side x, int k, int round);
  std::string memoKey(const Position& p, int k, int round) const;
  bool linearPosition(const Position& p) const;

  Variant variant_;
  std::vector<SideConstraint> constraints_;
  BudgetMeter meter_;
  PairFilter filter_;
  bool fast_ = true;
  std::unordered_map<std::string, bool> localMemo_;  // used when a filter is set
};

}  // namespace msgames
