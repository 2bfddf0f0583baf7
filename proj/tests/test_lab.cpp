#include <doctest.h>

#include "helpers.hpp"
#include "msgames/bounds.hpp"
#include "msgames/strategy_lab.hpp"
#include "oracles.hpp"

using namespace msgames;
using namespace testing;

namespace {

Trace smallTrace() {
  Trace t;
  t.variant = {true, false};
  t.initial = {{Side::A, "A1", "lo:3", {}}, {Side::B, "B1", "lo:2", {}}};
  t.lines = {{1, Side::A, "A1", el(2)}, {1, Side::B, "B1.1", el(1)}, {1, Side::B, "B1.2", el(2)}};
  return t;
}

}  // namespace

TEST_SUITE("lab") {
  TEST_CASE("trace text round-trips") {
    Trace t = smallTrace();
    t.result = "duplicator";
    const std::string text = trace_to_text(t);
    CHECK(text.find("# variant\tatoms=1\tnoPlayOnTop=0\n") == 0);
    CHECK(text.find("1\tA\tA1\t2\n") != std::string::npos);
    const Trace back = trace_from_text(text);
    CHECK(trace_to_text(back) == text);
    const auto frames = replay_trace(back);
    REQUIRE(frames.size() == 2);
    CHECK(frames[1].side[1].size() == 2);
    CHECK(frames[1].side[1][0].first == "B1.1");
  }

  TEST_CASE("malformed traces name the offending line") {
    CHECK_THROWS_WITH_AS(trace_from_text("# variant\tatoms=0\tnoPlayOnTop=0\n1\tA\tA1\n"), doctest::Contains("line 2"),
                         UsageError);
    CHECK_THROWS_AS(trace_from_text("1\tC\tA1\t2\n"), UsageError);
    CHECK_THROWS_AS(trace_from_text("1\tA\tA1\tzz\n"), UsageError);
    Trace t = smallTrace();
    t.lines[0].board = "A9";
    CHECK_THROWS_AS(replay_trace(t), UsageError);
    t = smallTrace();
    t.lines[1].round = 2;
    CHECK_THROWS_AS(replay_trace(t), UsageError);
  }

  TEST_CASE("play on top is detected") {
    Trace t;
    t.initial = {{Side::A, "A1", "lo:3", {el(2)}}, {Side::B, "B1", "lo:3", {el(2)}}};
    t.lines = {{1, Side::A, "A1", el(2)}, {1, Side::B, "B1.2", el(2)}};
    CHECK(trace_has_play_on_top(t));
    t.lines = {{1, Side::A, "A1", el(1)}, {1, Side::B, "B1.1", el(1)}};
    CHECK_FALSE(trace_has_play_on_top(t));
  }

  TEST_CASE("ten_v_nine beats the oblivious Duplicator, with a play on top, deterministically") {
    const GameState s = game({10}, {9}, 4);
    RunOutcome a = run_spoiler(spoiler_script("ten_v_nine"), s);
    CHECK(a.spoilerWins);
    CHECK(a.trace.result == "spoiler");
    CHECK(trace_has_play_on_top(a.trace));
    RunOutcome b = run_spoiler(spoiler_script("ten_v_nine"), s);
    CHECK(trace_to_text(a.trace) == trace_to_text(b.trace));
    // The trace replays to a position with no alive pair.
    const auto frames = replay_trace(trace_from_text(trace_to_text(a.trace)));
    const TraceFrame& last = frames.back();
    bool alive = false;
    for (const auto& [ia, x] : last.side[0])
      for (const auto& [ib, y] : last.side[1]) alive |= partial_iso(x, y);
    CHECK_FALSE(alive);
    CHECK(a.peakBoards > 1);
  }

  TEST_CASE("ten_v_nine loses where Duplicator has room") {
    bool won = false;
    try {
      won = run_spoiler(spoiler_script("ten_v_nine"), game({11}, {10}, 4)).spoilerWins;
    } catch (const ScriptDefect&) {
    }
    CHECK_FALSE(won);
  }

  TEST_CASE("middle_recursive wins inside its frame domain") {
    CHECK(run_spoiler(spoiler_script("middle_recursive"), game({21}, {20}, 5)).spoilerWins);
    for (int r = 4; r <= 5; ++r) {
      const int g = static_cast<int>(g_closed(r));
      for (int little = g - 3; little < g; ++little)
        for (int big : {g, g + 1}) {
          CAPTURE(r);
          CAPTURE(little);
          CAPTURE(big);
          CHECK(run_spoiler(spoiler_script("middle_recursive"), game({big}, {little}, r)).spoilerWins);
        }
    }
    // Outside the domain the script reports a defect rather than playing on.
    CHECK_THROWS_AS(run_spoiler(spoiler_script("middle_recursive"), game({22}, {21}, 5)), ScriptDefect);
    CHECK_THROWS_AS(run_spoiler(spoiler_script("middle_recursive"), game({5}, {3}, 3)), ScriptDefect);
  }

  TEST_CASE("middle_recursive wins every four-round game below the threshold") {
    // The oblivious Duplicator is optimal, so beating it settles the game.
    for (int n = 10; n <= 12; ++n)
      for (int m = 7; m < 10; ++m) {
        const GameState s = game({n}, {m}, 4);
        CAPTURE(n);
        CAPTURE(m);
        CHECK(run_spoiler(spoiler_script("middle_recursive"), s).spoilerWins);
      }
  }

  TEST_CASE("certificate scripts replay solver certificates") {
    for (auto [n, m, r] : std::vector<std::tuple<int, int, int>>{{5, 3, 3}, {3, 1, 2}, {8, 2, 3}, {4, 1, 2}}) {
      const GameState s = game({n}, {m}, r);
      MsVerdict v = ms_winner(s);
      REQUIRE(v.certificate);
      RunOutcome o = run_spoiler(certificate_script(*v.certificate), s);
      CHECK(o.spoilerWins);
    }
  }

  TEST_CASE("interlude beats the naive mirror with a play on top") {
    DuplicatorScript mirror = duplicator_script("naive_mirror");
    RunOutcome o = run_spoiler(spoiler_script("interlude"), game({10}, {9}, 4), &mirror);
    CHECK(o.spoilerWins);
    CHECK(trace_has_play_on_top(o.trace));
  }

  TEST_CASE("the naive mirror is refuted on 10 vs 9") {
    CertifyOutcome c = certify_duplicator(duplicator_script("naive_mirror"), game({10}, {9}, 4), Budget::fromEnvironment(),
                                          {spoiler_script("interlude")});
    CHECK_FALSE(c.certified);
    REQUIRE(c.refutation);
    REQUIRE(c.refutationTrace);
    CHECK(c.refutedBy == "interlude");
    CHECK(trace_has_play_on_top(*c.refutationTrace));
    CHECK(c.refutationTrace->result == "spoiler");
  }

  TEST_CASE("split_board is certified on 11 vs 10 with atoms") {
    CertifyOutcome c = certify_duplicator(duplicator_script("split_board"), game({11}, {10}, 4, {true, false}));
    CHECK(c.certified);
    CHECK(c.branches > 0);
  }

  TEST_CASE("split_board cannot hold 5 vs 4 with atoms in three rounds") {
    const GameState s = game({5}, {4}, 3, {true, false});
    CHECK(ms_winner(s, {Budget::fromEnvironment(), false, {}}).winner == Player::Spoiler);
    CHECK_FALSE(certify_duplicator(duplicator_script("split_board"), s).certified);
  }

  TEST_CASE("the reduction pact holds on aligned positions") {
    GameState s;
    s.sideA = {withHistory(lo(6), {el(3)}, true)};
    s.sideB = {withHistory(lo(5), {el(3)}, true)};
    s.roundsLeft = 2;
    s.variant = {true, false};
    CHECK(certify_duplicator(duplicator_script("reduction"), s).certified);
  }

  TEST_CASE("certification agrees with the solver for the oblivious script") {
    for (int r = 1; r <= 3; ++r)
      for (int n = 2; n <= 6; ++n)
        for (int m = 1; m < n; ++m) {
          const GameState s = game({n}, {m}, r);
          const bool dup = ms_winner(s, {Budget::fromEnvironment(), false, {}}).winner == Player::Duplicator;
          CHECK(certify_duplicator(duplicator_script("oblivious"), s).certified == dup);
        }
  }

  TEST_CASE("mirror pacts are monotone") {
    const PairFilter pact = mirror_pact(2, true);
    for (int a1 = 1; a1 <= 5; ++a1)
      for (int b1 = 1; b1 <= 4; ++b1) {
        const Board a = withHistory(lo(5), {el(a1)}), b = withHistory(lo(4), {el(b1)});
        if (pact(a, b)) continue;
        for (int a2 = 1; a2 <= 5; ++a2)
          for (int b2 = 1; b2 <= 4; ++b2) CHECK_FALSE(pact(extend(a, el(a2)), extend(b, el(b2))));
      }
  }

  TEST_CASE("ladder chains adjacent certifications") {
    LadderReport rep = ladder(duplicator_script("oblivious"), 4, 7, 3, {});
    CHECK(rep.complete);
    CHECK(rep.steps.size() == 3);
    CHECK(rep.implied.size() == 6);
    LadderReport broken = ladder(duplicator_script("oblivious"), 2, 5, 3, {});
    CHECK_FALSE(broken.complete);
  }

  TEST_CASE("appendix_a E-F script wins below 2^r - 1 with checkable witnesses") {
    const EfScript script = ef_script("appendix_a");
    for (int r = 1; r <= 4; ++r)
      for (int n = 2; n <= 17; ++n)
        for (int m = 1; m < n; ++m) {
          const bool expected = static_cast<std::uint64_t>(m) < f_closed(r);
          EfRunOutcome o = run_ef_spoiler(script, Board(lo(n)), Board(lo(m)), r);
          CHECK(o.spoilerWins == expected);
          if (o.spoilerWins && n <= 9) CHECK(check_ef_witness(Board(lo(n)), Board(lo(m)), {}, r, *o.witness));
        }
    CHECK_THROWS_AS(run_ef_spoiler(script, Board(lo(3)), Board(lo(3)), 2), ScriptDefect);
  }

  TEST_CASE("unknown script names") {
    CHECK_THROWS_AS(spoiler_script("nope"), UsageError);
    CHECK_THROWS_AS(duplicator_script("nope"), UsageError);
    CHECK_THROWS_AS(ef_script("nope"), UsageError);
  }
}
