#include <doctest.h>

#include "helpers.hpp"
#include "msgames/ms_solver.hpp"
#include "oracles.hpp"

using namespace msgames;
using namespace testing;

namespace {

bool solverSpoiler(const GameState& s) { return ms_winner(s, {Budget::fromEnvironment(), false, {}}).winner == Player::Spoiler; }

void agree(const GameState& s, const std::string& what) {
  CAPTURE(what);
  MsVerdict v = ms_winner(s);
  const bool spoiler = v.winner == Player::Spoiler;
  REQUIRE(spoiler == oracle::msSpoilerWins(s));
  if (spoiler) {
    REQUIRE(v.certificate);
    CHECK(replay_certificate(s, *v.certificate));
  }
}

std::string name(const std::vector<int>& a, const std::vector<int>& b, int r) {
  std::string s;
  for (int x : a) s += std::to_string(x) + " ";
  s += "vs ";
  for (int x : b) s += std::to_string(x) + " ";
  return s + "r=" + std::to_string(r);
}

}  // namespace

TEST_SUITE("ms") {
  TEST_CASE("agrees with the brute-force game on linear orders") {
    for (int r = 0; r <= 3; ++r)
      for (int n = 1; n <= 4; ++n)
        for (int m = 1; m <= 4; ++m) agree(game({n}, {m}, r), name({n}, {m}, r));
    for (int n = 5; n <= 6; ++n)
      for (int m = 1; m <= 6; ++m) agree(game({n}, {m}, 2), name({n}, {m}, 2));
  }

  TEST_CASE("agrees with the brute-force game on sets of orders") {
    const std::vector<std::pair<std::vector<int>, std::vector<int>>> cases = {
        {{2, 4}, {3}}, {{1, 3}, {2}}, {{3}, {1, 2}}, {{2, 3}, {1, 4}}, {{4}, {2, 3}}, {{1, 2, 3}, {4}}};
    for (const auto& [a, b] : cases)
      for (int r = 1; r <= 3; ++r) agree(game(a, b, r), name(a, b, r));
  }

  TEST_CASE("agrees with the brute-force game with atoms") {
    for (int r = 1; r <= 3; ++r)
      for (int n = 1; n <= (r == 3 ? 3 : 4); ++n)
        for (int m = 1; m <= (r == 3 ? 3 : 4); ++m) agree(game({n}, {m}, r, {true, false}), name({n}, {m}, r) + " atoms");
  }

  TEST_CASE("agrees with the brute-force game without play on top") {
    for (bool atoms : {false, true})
      for (int r = 1; r <= 3; ++r)
        for (int n = 1; n <= 3; ++n)
          for (int m = 1; m <= 3; ++m)
            agree(game({n}, {m}, r, {atoms, true}), name({n}, {m}, r) + " noPlayOnTop" + (atoms ? " atoms" : ""));
  }

  TEST_CASE("agrees with the brute-force game under side constraints") {
    for (const char* p : {"E", "A", "EA", "AE", "EAE", "AEA", "EEA", "AAA"})
      for (int n = 1; n <= 4; ++n)
        for (int m = 1; m <= 4; ++m) {
          const auto c = parse_prefix(p);
          agree(game({n}, {m}, static_cast<int>(c.size()), {}, c), name({n}, {m}, 0) + " prefix " + p);
        }
  }

  TEST_CASE("agrees with the brute-force game on random digraphs") {
    std::mt19937 rng(17);
    for (int t = 0; t < 60; ++t) {
      const int r = 1 + t % 2;
      GameState s = GameState::make({randomDigraph(rng, 3, 0.4)}, {randomDigraph(rng, 3, 0.4), randomDigraph(rng, 2, 0.5)}, r);
      agree(s, "digraph case " + std::to_string(t));
    }
  }

  TEST_CASE("agrees with the brute-force game from mid-game positions") {
    for (int n = 2; n <= 4; ++n)
      for (int m = 1; m <= 3; ++m)
        for (int p = 1; p <= n; ++p)
          for (int q = 1; q <= m; ++q) {
            GameState s;
            s.sideA = {withHistory(lo(n), {el(p)})};
            s.sideB = {withHistory(lo(m), {el(q)}), withHistory(lo(m), {el(m + 1 - q)})};
            s.roundsLeft = 2;
            agree(s, "history " + std::to_string(p) + "/" + std::to_string(q) + " " + name({n}, {m}, 2));
          }
  }

  TEST_CASE("intro pair: lo:3 and lo:2 agree on two-quantifier sentences") {
    MsVerdict v = ms_winner(game({3}, {2}, 2));
    CHECK(v.winner == Player::Duplicator);
    CHECK_FALSE(v.certificate);
  }

  TEST_CASE("rounds exhausted: a witness pair is reported") {
    MsVerdict v = ms_winner(game({3}, {2}, 0));
    CHECK(v.winner == Player::Duplicator);
    REQUIRE(v.witnessPair);
    CHECK(partial_iso(v.witnessPair->first, v.witnessPair->second));
  }

  TEST_CASE("certificates round-trip through JSON and resolve plans on boards") {
    GameState s = game({5}, {3}, 3);
    MsVerdict v = ms_winner(s);
    REQUIRE(v.certificate);
    auto [s2, cert] = certificate_from_json(certificate_to_json(s, *v.certificate));
    CHECK(s2.roundsLeft == 3);
    CHECK(replay_certificate(s2, cert));
    const RoundPlan& first = cert.rounds.front();
    const auto sels = plan_selections(first, first.side == Side::A ? s2.sideA : s2.sideB);
    CHECK(sels.size() == (first.side == Side::A ? s2.sideA.size() : s2.sideB.size()));
    CHECK_THROWS_AS(certificate_from_json("{}"), UsageError);
  }

  TEST_CASE("a certificate does not replay on a Duplicator-won game") {
    MsVerdict v = ms_winner(game({5}, {3}, 3));
    REQUIRE(v.certificate);
    CHECK_FALSE(replay_certificate(game({5}, {4}, 3), *v.certificate));
  }

  TEST_CASE("filters restrict aliveness") {
    // A filter that kills every pair hands Spoiler the game at once.
    MsVerdict v = ms_winner(game({3}, {2}, 2), {Budget::fromEnvironment(), true, [](const Board&, const Board&) { return false; }});
    CHECK(v.winner == Player::Spoiler);
  }

  TEST_CASE("budget overrun raises") {
    CHECK_THROWS_AS(ms_winner(game({12}, {11}, 4), {Budget{100, 0}, false, {}}), BudgetExceeded);
  }

  TEST_CASE("solver verdicts are deterministic") {
    GameState s = game({7}, {3}, 3);
    MsVerdict a = ms_winner(s), b = ms_winner(s);
    CHECK(a.winner == b.winner);
    REQUIRE(a.certificate);
    CHECK(certificate_to_json(s, *a.certificate) == certificate_to_json(s, *b.certificate));
    CHECK(solverSpoiler(s));
  }
}
