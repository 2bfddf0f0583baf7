#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msgames/game_state.hpp"

namespace msgames {

// Extra condition for a cross pair (side-A board, side-B board) to count as
// alive on top of partial isomorphism. Must be monotone: once false for a
// pair, false for every pair of extensions.
using PairFilter = std::function<bool(const Board& a, const Board& b)>;

struct RoundPlan {
  Side side = Side::A;
  // Selection per board on `side`, both in canonical coordinates.
  std::map<CanonicalKey, Selection> moves;
};

// Spoiler's moves against the oblivious Duplicator, one plan per round. May
// stop early once no alive pair remains.
struct SpoilerCertificate {
  std::vector<RoundPlan> rounds;
};

struct MsVerdict {
  Player winner = Player::Duplicator;
  std::optional<SpoilerCertificate> certificate;
  std::optional<std::pair<Board, Board>> witnessPair;  // alive pair when no rounds remain
  std::uint64_t nodes = 0;
  std::uint64_t millis = 0;
};

struct MsOptions {
  Budget budget = Budget::fromEnvironment();
  bool certificate = true;
  PairFilter filter;  // empty = plain partial isomorphism
};

MsVerdict ms_winner(const GameState& state, const MsOptions& options = {});

// Plays the certificate against oblivious expansion. A board the plan does not
// cover makes the replay fail; structurally illegal moves throw UsageError.
bool replay_certificate(const GameState& state, const SpoilerCertificate& cert,
                        const PairFilter& filter = {});

// Spoiler's move for the first round of a certificate, resolved on `boards`.
std::vector<Selection> plan_selections(const RoundPlan& plan, const std::vector<Board>& boards);

std::string certificate_to_json(const GameState& state, const SpoilerCertificate& cert);
std::pair<GameState, SpoilerCertificate> certificate_from_json(const std::string& text);

}  // namespace msgames
