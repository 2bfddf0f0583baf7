#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msgames/ms_solver.hpp"
#include "msgames/structure.hpp"

namespace msgames {

enum class NodeKind { Exists, Forall, And, Or, Not, Implies, Less, Eq, AtomPred, Rel };

struct Node;
using Sentence = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  std::string name;                // bound variable, or relation name for Rel
  std::vector<Sentence> kids;      // body / operands
  std::vector<std::string> terms;  // variable or constant names for atomic nodes
};

bool same_sentence(const Sentence& a, const Sentence& b);
// Equality up to consistent renaming of bound variables.
bool alpha_equivalent(const Sentence& a, const Sentence& b);

namespace build {
Sentence exists(std::string var, Sentence body);
Sentence forall(std::string var, Sentence body);
Sentence conj(std::vector<Sentence> kids);
Sentence disj(std::vector<Sentence> kids);
Sentence neg(Sentence kid);
Sentence implies(Sentence lhs, Sentence rhs);
Sentence less(std::string a, std::string b);
Sentence eq(std::string a, std::string b);
Sentence atom(std::string a);
Sentence rel(std::string name, std::vector<std::string> terms);
}  // namespace build

// Grammar: quantifier blocks "E x E y . body" / "A x . body" (also the
// unicode symbols), infix "<", "=", "!=", chained "x < y < z", "&", "|", "!",
// "->" (right associative, lowest), "atom(t)", "R(t1, ..., tk)", parentheses.
Sentence parse_sentence(std::string_view text);
std::string render(const Sentence& s);

std::vector<std::string> free_variables(const Sentence& s);

struct QuantifierProfile {
  int count = 0;
  int rank = 0;
  std::optional<std::string> prefix;  // "EAE" style when prenex
};
QuantifierProfile quantifier_profile(const Sentence& s);

// A structure, optionally extended with `atoms` unrelated extra elements that
// satisfy atom(x). Domain values: elements 0..n-1, then atom j as n + j.
// `named` binds extra constant names to domain values.
struct Model {
  const Structure* structure = nullptr;
  int atoms = 0;
  std::vector<std::pair<std::string, int>> named;
};

struct EvalOptions {
  // Memoize quantified subformulas on plain linear orders by order type of the
  // free variables with gap sizes capped at 2^rank - 1.
  bool memo = true;
};

bool eval(const Sentence& s, const Model& m, const EvalOptions& options = {});
bool eval(const Sentence& s, const Structure& m, const EvalOptions& options = {});
// The board's history selections are bound to constants c1, c2, ...; the
// model carries the board's atoms plus `freshAtoms` more.
Model board_model(const Board& b, int freshAtoms = 0);
std::string history_constant(int round);

// Named sentences: phi1..phi6, phi4_5..phi4_9, and chain (needs r >= 1).
Sentence library(const std::string& name, int r = 0);
std::vector<std::string> library_names();
// Size at which the named sentence becomes true on linear orders.
int library_threshold(const std::string& name, int r = 0);

// Distinguishing sentence from a Spoiler certificate: prenex, quantifier k
// existential iff Spoiler's round k is on side A, matrix a disjunction of the
// complete atomic types of the side-A boards at the end of the replay.
Sentence synthesize(const SpoilerCertificate& cert, const GameState& state);

}  // namespace msgames
