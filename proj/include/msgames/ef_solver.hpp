#pragma once

#include <memory>
#include <vector>

#include "msgames/game_state.hpp"

namespace msgames {

// Spoiler's move at one node of a winning strategy, with one branch per
// Duplicator reply. A node with no move is a leaf where the position is dead.
struct EfStrategy {
  struct Branch {
    Selection reply;
    std::unique_ptr<EfStrategy> next;
  };
  bool leaf = true;
  Side side = Side::A;
  Selection move;
  std::vector<Branch> branches;

  std::size_t leafCount() const;
};

struct EfVerdict {
  Player winner = Player::Duplicator;
  std::shared_ptr<EfStrategy> witness;  // set iff winner is Spoiler and requested
  std::uint64_t nodes = 0;
};

struct EfOptions {
  Budget budget = Budget::fromEnvironment();
  bool witness = false;
};

EfVerdict ef_winner(const Board& a, const Board& b, int rounds, const EfOptions& options = {});

// Side-constrained game: one constraint per round (PlayInA for an existential
// quantifier, PlayInB for a universal one).
EfVerdict ef_prefix_winner(const Board& a, const Board& b,
                           const std::vector<SideConstraint>& prefix,
                           const EfOptions& options = {});

// Checks that every leaf of the witness is dead and that Spoiler's moves obey
// the constraints. Returns false for a non-winning or malformed witness.
bool check_ef_witness(const Board& a, const Board& b, const std::vector<SideConstraint>& constraints,
                      int rounds, const EfStrategy& witness);

}  // namespace msgames
