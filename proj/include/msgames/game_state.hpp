#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msgames/structure.hpp"

namespace msgames {

enum class Side : std::uint8_t { A = 0, B = 1 };
enum class Player : std::uint8_t { Spoiler, Duplicator };
enum class SideConstraint : std::uint8_t { Free, PlayInA, PlayInB };

inline Side other(Side s) { return s == Side::A ? Side::B : Side::A; }
inline int index(Side s) { return static_cast<int>(s); }
inline char sideChar(Side s) { return s == Side::A ? 'A' : 'B'; }
inline bool allows(SideConstraint c, Side s) {
  return c == SideConstraint::Free || (c == SideConstraint::PlayInA) == (s == Side::A);
}
const char* name(Player p);

// "EAE" style prefix: E forces side A, A forces side B, '.' or '*' leaves it free.
std::vector<SideConstraint> parse_prefix(const std::string& prefix);
std::string prefix_string(const std::vector<SideConstraint>& constraints);

struct Variant {
  bool atoms = false;
  bool noPlayOnTop = false;
  bool operator==(const Variant&) const = default;
};

struct GameState {
  std::vector<Board> sideA;
  std::vector<Board> sideB;
  int roundsLeft = 0;
  // One entry per remaining round; empty means every round is free.
  std::vector<SideConstraint> constraints;
  Variant variant;

  std::vector<Board>& side(Side s) { return s == Side::A ? sideA : sideB; }
  const std::vector<Board>& side(Side s) const { return s == Side::A ? sideA : sideB; }
  SideConstraint constraintAt(int round) const {
    return round < static_cast<int>(constraints.size()) ? constraints[round] : SideConstraint::Free;
  }

  // Fresh game on the given structures. Validates and deduplicates.
  static GameState make(const std::vector<StructurePtr>& a, const std::vector<StructurePtr>& b,
                        int rounds, Variant variant = {},
                        std::vector<SideConstraint> constraints = {});

  // Sorts each side by canonical key, drops duplicates and checks invariants.
  void normalize();
  GameState mirrored() const;
};

struct Budget {
  std::uint64_t maxNodes = 0;   // 0 = unlimited
  std::uint64_t maxMillis = 0;  // 0 = unlimited
  // Defaults, overridden by MSGAMES_BUDGET_NODES / MSGAMES_BUDGET_MS.
  static Budget fromEnvironment();
};

// Counts search nodes and enforces a Budget.
class BudgetMeter {
 public:
  explicit BudgetMeter(Budget b);
  void tick(std::uint64_t n = 1) {
    nodes_ += n;
    if (nodes_ - lastCheck_ >= 1024) check();
  }
  std::uint64_t nodes() const { return nodes_; }
  std::uint64_t elapsedMillis() const;

 private:
  void check();
  Budget budget_;
  std::uint64_t nodes_ = 0;
  std::uint64_t lastCheck_ = 0;
  std::chrono::steady_clock::time_point start_;
};

// Every single-selection extension of every board (all elements; under atoms
// also every existing atom id and one fresh atom), deduplicated.
std::vector<Board> duplicator_expand(const std::vector<Board>& boards, Variant variant);

// Spoiler's legal selections on a board, in candidate order.
std::vector<Selection> legal_selections(const Board& b, Variant variant);

std::vector<std::pair<CanonicalKey, CanonicalKey>> alive_pairs(const GameState& state);

}  // namespace msgames
