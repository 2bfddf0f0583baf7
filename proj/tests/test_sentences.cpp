#include <doctest.h>

#include "helpers.hpp"
#include "msgames/bounds.hpp"
#include "msgames/sentence.hpp"
#include "oracles.hpp"

using namespace msgames;
using namespace testing;

namespace {

// Random sentence over "<" or "E" with variables x0..x(bound-1); `fuel`
// limits the number of connectives.
Sentence randomFormula(std::mt19937& rng, int depth, int bound, const std::string& rel, bool atoms, int& fuel) {
  std::uniform_int_distribution<int> pick(0, 9);
  auto var = [&] { return "x" + std::to_string(std::uniform_int_distribution<int>(0, bound - 1)(rng)); };
  const int k = pick(rng);
  if (bound == 0 && depth == 0) return build::eq("x0", "x0");
  if (bound == 0 || (depth > 0 && k < 4)) {
    const std::string v = "x" + std::to_string(bound);
    Sentence body = randomFormula(rng, depth - 1, bound + 1, rel, atoms, fuel);
    return k % 2 ? build::exists(v, body) : build::forall(v, body);
  }
  if (fuel > 0 && k < 8) {
    --fuel;
    Sentence a = randomFormula(rng, depth, bound, rel, atoms, fuel);
    if (k == 4) return build::neg(a);
    Sentence b = randomFormula(rng, depth, bound, rel, atoms, fuel);
    if (k == 5) return build::conj({a, b});
    if (k == 6) return build::disj({a, b});
    return build::implies(a, b);
  }
  if (atoms && k == 9) return build::atom(var());
  if (k == 8) return build::eq(var(), var());
  return rel == "<" ? build::less(var(), var()) : build::rel(rel, {var(), var()});
}

}  // namespace

TEST_SUITE("sentences") {
  TEST_CASE("parse and render round-trip") {
    for (const std::string& name : library_names()) {
      const Sentence phi = name == "chain" ? library(name, 4) : library(name);
      const Sentence back = parse_sentence(render(phi));
      CHECK(same_sentence(phi, back));
    }
    const Sentence s = parse_sentence("E x A y . x < y | x = y");
    const QuantifierProfile p = quantifier_profile(s);
    CHECK(p.count == 2);
    CHECK(p.rank == 2);
    REQUIRE(p.prefix);
    CHECK(*p.prefix == "EA");
    CHECK(free_variables(parse_sentence("E x . x < y")) == std::vector<std::string>{"y"});
    CHECK(alpha_equivalent(parse_sentence("E x . A y . x < y"), parse_sentence("E u . A v . u < v")));
    CHECK_FALSE(alpha_equivalent(parse_sentence("E x . A y . x < y"), parse_sentence("E u . A v . v < u")));
    CHECK(same_sentence(parse_sentence("∃x ∀y . x < y"), parse_sentence("E x A y . x < y")));
    CHECK(same_sentence(parse_sentence("E x (x < x)"), parse_sentence("E x . (x < x)")));
  }

  TEST_CASE("syntax errors report a position") {
    for (const char* bad : {"E x . x <", "E . x < y", "x < y)", "E x . R(x", "E x . x ? y", ""}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(parse_sentence(bad), SyntaxError);
    }
  }

  TEST_CASE("evaluation matches direct recursion on linear orders") {
    for (const std::string& name : library_names()) {
      if (name == "phi6" || name == "phi5") continue;
      const Sentence phi = name == "chain" ? library(name, 3) : library(name);
      for (int n = 1; n <= 11; ++n) {
        CAPTURE(name);
        CAPTURE(n);
        const bool expected = oracle::eval(phi, Model{lo(n).get(), 0, {}});
        REQUIRE(eval(phi, *lo(n)) == expected);
        REQUIRE(eval(phi, *lo(n), {false}) == expected);
      }
    }
  }

  TEST_CASE("evaluation matches direct recursion on random sentences") {
    std::mt19937 rng(23);
    for (int t = 0; t < 400; ++t) {
      const bool order = t % 2 == 0;
      const bool atoms = t % 3 == 0;
      const int n = 1 + t % 5;
      StructurePtr s = order ? lo(n) : randomDigraph(rng, n, 0.4);
      int fuel = 6;
      const Sentence phi = randomFormula(rng, 3, 0, order ? "<" : "E", atoms, fuel);
      Model m{s.get(), atoms ? 2 : 0, {}};
      if (t % 4 == 1) m.named = {{"c1", 0}};
      CAPTURE(render(phi));
      const bool expected = oracle::eval(phi, m);
      REQUIRE(eval(phi, m) == expected);
      REQUIRE(eval(phi, m, {false}) == expected);
    }
  }

  TEST_CASE("unknown symbols are rejected") {
    CHECK_THROWS_AS(eval(parse_sentence("E x . x < y"), *lo(3)), UsageError);
    CHECK_THROWS_AS(eval(parse_sentence("E x . R(x, x)"), *lo(3)), UsageError);
    CHECK_THROWS_AS(library("nope"), UsageError);
  }

  TEST_CASE("library sentences switch on at their thresholds") {
    CHECK_FALSE(eval(library("phi2"), *lo(1)));
    CHECK(eval(library("phi2"), *lo(2)));
    for (int r = 2; r <= 5; ++r) {
      const std::string name = "phi" + std::to_string(r);
      const int g = static_cast<int>(g_closed(r));
      CHECK(library_threshold(name) == g);
      CHECK(eval(library(name), *lo(g)));
      CHECK_FALSE(eval(library(name), *lo(g - 1)));
      CHECK(quantifier_profile(library(name)).count <= r);
    }
    for (int k = 5; k <= 9; ++k) {
      const Sentence phi = library("phi4_" + std::to_string(k));
      CHECK(eval(phi, *lo(k)));
      CHECK_FALSE(eval(phi, *lo(k - 1)));
      CHECK(quantifier_profile(phi).count <= 4);
    }
    for (int r = 1; r <= 6; ++r) {
      CHECK(eval(library("chain", r), *lo(r)));
      if (r > 1) CHECK_FALSE(eval(library("chain", r), *lo(r - 1)));
    }
  }

  TEST_CASE("phi6 at its threshold with the memoized evaluator") {
    CHECK(eval(library("phi6"), *lo(42)));
    CHECK_FALSE(eval(library("phi6"), *lo(41)));
    CHECK(quantifier_profile(library("phi6")).count <= 6);
  }

  TEST_CASE("threshold sentences are true on every larger order") {
    for (int r = 2; r <= 4; ++r) {
      const std::string name = "phi" + std::to_string(r);
      for (int n = 1; n <= 14; ++n) CHECK(eval(library(name), *lo(n)) == (n >= static_cast<int>(g_closed(r))));
    }
  }

  TEST_CASE("synthesized sentences separate the sides of every Spoiler win") {
    std::vector<GameState> states;
    for (int r = 1; r <= 3; ++r)
      for (int n = 1; n <= 6; ++n)
        for (int m = 1; m <= 6; ++m) {
          states.push_back(game({n}, {m}, r));
          if (n <= 4 && m <= 4) states.push_back(game({n}, {m}, r, {true, false}));
        }
    states.push_back(game({2, 5}, {3}, 2));
    states.push_back(game({1, 4}, {2, 3}, 3));
    states.push_back(game({3}, {2}, 2, {}, parse_prefix("EA")));
    {
      GameState mid;
      mid.sideA = {withHistory(lo(5), {el(2)})};
      mid.sideB = {withHistory(lo(4), {el(2)})};
      mid.roundsLeft = 2;
      states.push_back(mid);
    }
    std::mt19937 rng(29);
    for (int t = 0; t < 20; ++t)
      states.push_back(GameState::make({randomDigraph(rng, 3, 0.4)}, {randomDigraph(rng, 3, 0.4)}, 2));

    int wins = 0;
    for (const GameState& s : states) {
      MsVerdict v = ms_winner(s);
      if (v.winner != Player::Spoiler) continue;
      ++wins;
      REQUIRE(v.certificate);
      const Sentence phi = synthesize(*v.certificate, s);
      const QuantifierProfile p = quantifier_profile(phi);
      CHECK(p.count <= s.roundsLeft);
      const int fresh = s.variant.atoms ? s.roundsLeft : 0;
      for (const Board& a : s.sideA) {
        CHECK(eval(phi, board_model(a, fresh)));
        if (a.base().size() <= 4) CHECK(oracle::eval(phi, board_model(a, fresh)));
      }
      for (const Board& b : s.sideB) CHECK_FALSE(eval(phi, board_model(b, fresh)));
      // Quantifier k is existential exactly when Spoiler's round k is on side A.
      REQUIRE(p.prefix);
      for (std::size_t k = 0; k < v.certificate->rounds.size() && k < p.prefix->size(); ++k)
        CHECK(((*p.prefix)[k] == 'E') == (v.certificate->rounds[k].side == Side::A));
    }
    CHECK(wins > 30);
  }
}
