#include "msgames/game_state.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace msgames {

const char* name(Player p) { return p == Player::Spoiler ? "Spoiler" : "Duplicator"; }

std::vector<SideConstraint> parse_prefix(const std::string& prefix) {
  std::vector<SideConstraint> out;
  for (char c : prefix) {
    switch (c) {
      case 'E': case 'e': out.push_back(SideConstraint::PlayInA); break;
      case 'A': case 'a': out.push_back(SideConstraint::PlayInB); break;
      case '.': case '*': out.push_back(SideConstraint::Free); break;
      default: throw UsageError(std::string("bad prefix character '") + c + "'");
    }
  }
  return out;
}

std::string prefix_string(const std::vector<SideConstraint>& constraints) {
  std::string out;
  for (auto c : constraints)
    out.push_back(c == SideConstraint::PlayInA ? 'E' : c == SideConstraint::PlayInB ? 'A' : '.');
  return out;
}

GameState GameState::make(const std::vector<StructurePtr>& a, const std::vector<StructurePtr>& b,
                          int rounds, Variant variant, std::vector<SideConstraint> constraints) {
  if (rounds < 0) throw UsageError("rounds must be non-negative");
  if (rounds > Board::kMaxHistory) throw UsageError("too many rounds");
  GameState s;
  for (const auto& p : a) s.sideA.emplace_back(p, variant.atoms);
  for (const auto& p : b) s.sideB.emplace_back(p, variant.atoms);
  s.roundsLeft = rounds;
  s.variant = variant;
  s.constraints = std::move(constraints);
  s.normalize();
  return s;
}

namespace {

void dedup(std::vector<Board>& boards) {
  std::vector<std::pair<CanonicalKey, std::size_t>> keyed;
  keyed.reserve(boards.size());
  for (std::size_t i = 0; i < boards.size(); ++i) keyed.emplace_back(canonical_key(boards[i]), i);
  std::sort(keyed.begin(), keyed.end());
  std::vector<Board> out;
  for (std::size_t i = 0; i < keyed.size(); ++i)
    if (i == 0 || keyed[i].first != keyed[i - 1].first) out.push_back(boards[keyed[i].second]);
  boards = std::move(out);
}

}  // namespace

void GameState::normalize() {
  if (sideA.empty() || sideB.empty()) throw UsageError("both sides need at least one structure");
  if (static_cast<int>(constraints.size()) > roundsLeft)
    throw UsageError("more side constraints than rounds");
  const Board& ref = sideA.front();
  for (const auto* side : {&sideA, &sideB}) {
    for (const Board& b : *side) {
      if (b.length() != ref.length()) throw UsageError("boards have different history lengths");
      if (b.base().vocabulary() != ref.base().vocabulary())
        throw UsageError("structures have different vocabularies");
      if (b.atomsEnabled() != variant.atoms) throw UsageError("board atom flag disagrees with variant");
    }
  }
  if (ref.length() + roundsLeft > Board::kMaxHistory) throw UsageError("too many rounds");
  dedup(sideA);
  dedup(sideB);
}

GameState GameState::mirrored() const {
  GameState m = *this;
  std::swap(m.sideA, m.sideB);
  for (auto& c : m.constraints) {
    if (c == SideConstraint::PlayInA) c = SideConstraint::PlayInB;
    else if (c == SideConstraint::PlayInB) c = SideConstraint::PlayInA;
  }
  return m;
}

Budget Budget::fromEnvironment() {
  Budget b;
  b.maxNodes = 2'000'000'000ULL;
  b.maxMillis = 30ULL * 60 * 1000;
  if (const char* v = std::getenv("MSGAMES_BUDGET_NODES")) b.maxNodes = std::strtoull(v, nullptr, 10);
  if (const char* v = std::getenv("MSGAMES_BUDGET_MS")) b.maxMillis = std::strtoull(v, nullptr, 10);
  return b;
}

BudgetMeter::BudgetMeter(Budget b) : budget_(b), start_(std::chrono::steady_clock::now()) {}

std::uint64_t BudgetMeter::elapsedMillis() const {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                        std::chrono::steady_clock::now() - start_)
                                        .count());
}

void BudgetMeter::check() {
  lastCheck_ = nodes_;
  if (budget_.maxNodes && nodes_ > budget_.maxNodes)
    throw BudgetExceeded("node budget of " + std::to_string(budget_.maxNodes) + " exceeded");
  if (budget_.maxMillis && elapsedMillis() > budget_.maxMillis)
    throw BudgetExceeded("time budget of " + std::to_string(budget_.maxMillis) + " ms exceeded");
}

std::vector<Board> duplicator_expand(const std::vector<Board>& boards, Variant variant) {
  std::vector<Board> out;
  for (const Board& b : boards) {
    if (b.atomsEnabled() != variant.atoms) throw UsageError("board atom flag disagrees with variant");
    for (int c = 0; c < b.candidateCount(); ++c) out.push_back(extend(b, b.candidate(c)));
  }
  dedup(out);
  return out;
}

std::vector<Selection> legal_selections(const Board& b, Variant variant) {
  std::vector<Selection> out;
  for (int c = 0; c < b.candidateCount(); ++c) {
    Selection s = b.candidate(c);
    if (variant.noPlayOnTop && !s.isAtom() && b.isSelected(s.index())) continue;
    out.push_back(s);
  }
  return out;
}

std::vector<std::pair<CanonicalKey, CanonicalKey>> alive_pairs(const GameState& state) {
  std::vector<std::pair<CanonicalKey, CanonicalKey>> out;
  std::vector<CanonicalKey> keysB;
  for (const Board& b : state.sideB) keysB.push_back(canonical_key(b));
  for (const Board& a : state.sideA) {
    CanonicalKey ka = canonical_key(a);
    for (std::size_t j = 0; j < state.sideB.size(); ++j)
      if (partial_iso(a, state.sideB[j])) out.emplace_back(ka, keysB[j]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace msgames
