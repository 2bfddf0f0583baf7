#include <doctest.h>

#include "helpers.hpp"
#include "msgames/bounds.hpp"
#include "msgames/ef_solver.hpp"
#include "oracles.hpp"

using namespace msgames;
using namespace testing;

namespace {

bool efSpoiler(int n, int m, int r) {
  return ef_winner(Board(lo(n)), Board(lo(m)), r, {Budget::fromEnvironment(), false}).winner == Player::Spoiler;
}

}  // namespace

TEST_SUITE("ef") {
  TEST_CASE("agrees with the brute-force game on linear orders") {
    for (int r = 0; r <= 3; ++r) {
      const int maxSize = r <= 2 ? 7 : 5;
      for (int n = 1; n <= maxSize; ++n)
        for (int m = 1; m <= maxSize; ++m) {
          CAPTURE(n);
          CAPTURE(m);
          CAPTURE(r);
          REQUIRE(efSpoiler(n, m, r) == oracle::efSpoilerWins(Board(lo(n)), Board(lo(m)), r));
        }
    }
  }

  TEST_CASE("agrees with the brute-force game on random digraphs") {
    std::mt19937 rng(3);
    for (int t = 0; t < 120; ++t) {
      const int r = 1 + t % 3;
      const int n = r == 3 ? 3 : 4;
      Board a(randomDigraph(rng, n, 0.4, t % 4 == 0)), b(randomDigraph(rng, n - t % 2, 0.4, t % 4 == 0));
      CAPTURE(t);
      EfVerdict v = ef_winner(a, b, r, {Budget::fromEnvironment(), true});
      REQUIRE((v.winner == Player::Spoiler) == oracle::efSpoilerWins(a, b, r));
      if (v.winner == Player::Spoiler) {
        REQUIRE(v.witness);
        CHECK(check_ef_witness(a, b, {}, r, *v.witness));
      }
    }
  }

  TEST_CASE("every Spoiler win comes with a checkable witness") {
    for (int r = 1; r <= 3; ++r)
      for (int n = 1; n <= 8; ++n)
        for (int m = 1; m <= 8; ++m) {
          EfVerdict v = ef_winner(Board(lo(n)), Board(lo(m)), r, {Budget::fromEnvironment(), true});
          if (v.winner != Player::Spoiler) continue;
          REQUIRE(v.witness);
          CHECK(check_ef_witness(Board(lo(n)), Board(lo(m)), {}, r, *v.witness));
          // The witness does not transfer to a Duplicator-won pair.
          if (m + 1 <= 8 && !efSpoiler(n, m + 1, r) && n != m + 1)
            CHECK_FALSE(check_ef_witness(Board(lo(n)), Board(lo(m + 1)), {}, r, *v.witness));
        }
  }

  TEST_CASE("prefix games agree with the brute-force game") {
    const char* prefixes[] = {"E", "A", "EE", "EA", "AE", "AA", "EEE", "EAE", "AEA", "EEA", "AAE", "E.A"};
    for (const char* p : prefixes) {
      const auto c = parse_prefix(p);
      const int r = static_cast<int>(c.size());
      for (int n = 1; n <= 5; ++n)
        for (int m = 1; m <= 5; ++m) {
          CAPTURE(std::string(p));
          CAPTURE(n);
          CAPTURE(m);
          EfVerdict v = ef_prefix_winner(Board(lo(n)), Board(lo(m)), c, {Budget::fromEnvironment(), true});
          REQUIRE((v.winner == Player::Spoiler) == oracle::efSpoilerWins(Board(lo(n)), Board(lo(m)), r, c));
          if (v.winner == Player::Spoiler) {
            REQUIRE(v.witness);
            CHECK(check_ef_witness(Board(lo(n)), Board(lo(m)), c, r, *v.witness));
          }
        }
    }
  }

  TEST_CASE("prefix examples") {
    CHECK(ef_prefix_winner(Board(lo(5)), Board(lo(4)), parse_prefix("EAE")).winner == Player::Spoiler);
    // Replaying the only element of lo:1 skips the universal round.
    CHECK(ef_prefix_winner(Board(lo(2)), Board(lo(1)), parse_prefix("EAE")).winner == Player::Spoiler);
    CHECK(ef_prefix_winner(Board(lo(5)), Board(lo(4)), parse_prefix("EEE")).winner == Player::Spoiler);
    // All-existential prefixes on orders behave like the free game: Spoiler
    // wins iff m < 2^r - 1.
    for (int r = 1; r <= 3; ++r)
      for (int n = 2; n <= 8; ++n)
        for (int m = 1; m < n; ++m) {
          const std::vector<SideConstraint> c(r, SideConstraint::PlayInA);
          const bool spoiler = ef_prefix_winner(Board(lo(n)), Board(lo(m)), c).winner == Player::Spoiler;
          CAPTURE(n);
          CAPTURE(m);
          CAPTURE(r);
          CHECK(spoiler == oracle::efSpoilerWins(Board(lo(n)), Board(lo(m)), r, c));
          CHECK(spoiler == (static_cast<std::uint64_t>(m) < f_closed(r)));
        }
    // Moves confined to the smaller order: Duplicator copies them by index.
    for (int r = 1; r <= 4; ++r)
      for (int n = 2; n <= 6; ++n)
        for (int m = 1; m < n; ++m) {
          const auto v = ef_prefix_winner(Board(lo(n)), Board(lo(m)), std::vector<SideConstraint>(r, SideConstraint::PlayInB));
          CHECK(v.winner == Player::Duplicator);
        }
    CHECK_THROWS_AS(ef_prefix_winner(Board(lo(2)), Board(lo(1)), {}), UsageError);
  }

  TEST_CASE("intro pair: E-F separates lo:3 from lo:2 in two rounds") {
    CHECK(efSpoiler(3, 2, 2));
    CHECK_FALSE(efSpoiler(3, 2, 1));
  }

  TEST_CASE("threshold 2^r - 1 for small r") {
    for (int r = 1; r <= 4; ++r)
      for (int n = 2; n <= 12; ++n)
        for (int m = 1; m < n; ++m) CHECK(efSpoiler(n, m, r) == (static_cast<std::uint64_t>(m) < f_closed(r)));
  }

  TEST_CASE("budget overrun raises") {
    CHECK_THROWS_AS(ef_winner(Board(lo(40)), Board(lo(39)), 6, {Budget{5, 0}, false}), BudgetExceeded);
  }
}
