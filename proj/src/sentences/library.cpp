#include <map>

#include "msgames/sentence.hpp"

namespace msgames {

namespace {

// The six conditions of the four-quantifier sentence over variables
// (x, y, z, w), with every order chain wrapped as pre + chain + post so the
// same block can be relativized to one side of outer variables.
struct Block {
  std::string x, y, z, w, pre, post;

  std::string c(const std::string& chain) const { return pre + chain + post; }
  std::string lt(const std::string& a, const std::string& b, const std::string& d) const {
    return c(a + " < " + b + " < " + d);
  }

  std::string cond(int k) const {
    const std::string fresh = w + " != " + z + " & ";
    switch (k) {
      case 1: return "(" + lt(x, z, y) + " -> (" + fresh + lt(x, w, y) + "))";
      case 2: return "(" + lt(x, y, z) + " -> (" + fresh + lt(x, y, w) + "))";
      case 3: return "(" + lt(y, z, x) + " -> (" + fresh + lt(y, w, x) + "))";
      case 4: return "(" + lt(z, y, x) + " -> (" + fresh + lt(w, y, x) + "))";
      case 5: return "(" + z + " = " + x + " -> (" + lt(x, w, y) + " | " + lt(y, w, x) + "))";
      case 6: return "(" + z + " = " + y + " -> (" + lt(x, y, w) + " | " + lt(w, y, x) + "))";
    }
    return "";
  }

  std::string conds(std::initializer_list<int> ks) const {
    std::string out;
    for (int k : ks) out += (out.empty() ? "" : " & ") + cond(k);
    return out;
  }
};

std::string phi4Text(std::initializer_list<int> ks) {
  Block b{"x", "y", "z", "w", "", ""};
  return "A x E y A z E w . " + b.conds(ks);
}

std::string phi5Text() {
  const auto all = {1, 2, 3, 4, 5, 6};
  Block right{"x2", "x3", "x4", "x5", "x1 < ", ""};
  Block left{"x2", "x3", "x4", "x5", "", " < x1"};
  return "E x1 A x2 E x3 A x4 E x5 . (x1 < x2 -> (" + right.conds(all) + ")) & (x2 < x1 -> (" +
         left.conds(all) + ")) & (x1 = x2 -> (x3 < x1 & x1 < x5))";
}

// The displayed six-quantifier sentence with its typesetting slips repaired:
// a missing conjunction, two misplaced x0 chains, and a last conjunct that
// must exclude x0 = x1 outright.
std::string phi6Text() {
  const auto all = {1, 2, 3, 4, 5, 6};
  Block rr{"x2", "x3", "x4", "x5", "x0 < x1 < ", ""};
  Block rl{"x2", "x3", "x4", "x5", "x0 < ", " < x1"};
  Block lr{"x2", "x3", "x4", "x5", "x1 < ", " < x0"};
  Block ll{"x2", "x3", "x4", "x5", "", " < x1 < x0"};
  return "A x0 E x1 A x2 E x3 A x4 E x5 . "
         "(x0 < x1 -> ((x0 < x1 < x2 -> (" + rr.conds(all) + ")) & (x0 < x2 < x1 -> (" + rl.conds(all) +
         ")) & ((x0 < x1 & x1 = x2) -> (x0 < x3 < x1 & x0 < x1 < x5)))) & "
         "(x1 < x0 -> ((x1 < x2 < x0 -> (" + lr.conds(all) + ")) & (x2 < x1 < x0 -> (" + ll.conds(all) +
         ")) & ((x1 = x2 & x1 < x0) -> (x3 < x1 < x0 & x1 < x5 < x0)))) & "
         "!(x0 = x1)";
}

std::string chainText(int r) {
  if (r < 1) throw DomainError("chain needs r >= 1");
  std::string q, body;
  for (int i = 1; i <= r; ++i) q += "E x" + std::to_string(i) + " ";
  if (r == 1) return q + ". x1 = x1";
  for (int i = 1; i < r; ++i)
    body += (i > 1 ? " & " : "") + std::string("x") + std::to_string(i) + " < x" + std::to_string(i + 1);
  return q + ". " + body;
}

const std::map<std::string, int>& thresholds() {
  static const std::map<std::string, int> t = {
      {"phi1", 1},   {"phi2", 2},   {"phi3", 4},   {"phi4", 10},  {"phi5", 21},  {"phi6", 42},
      {"phi4_5", 5}, {"phi4_6", 6}, {"phi4_7", 7}, {"phi4_8", 8}, {"phi4_9", 9},
  };
  return t;
}

}  // namespace

Sentence library(const std::string& name, int r) {
  if (name == "phi1") return parse_sentence("E x . x = x");
  if (name == "phi2") return parse_sentence("E x E y . x < y");
  if (name == "phi3") return parse_sentence("A x E y E z . x < y < z | y < z < x");
  if (name == "phi4") return parse_sentence(phi4Text({1, 2, 3, 4, 5, 6}));
  if (name == "phi4_9") return parse_sentence(phi4Text({1, 2, 3, 5, 6}));
  if (name == "phi4_8") return parse_sentence(phi4Text({2, 3, 5, 6}));
  if (name == "phi4_7") return parse_sentence(phi4Text({2, 5, 6}));
  if (name == "phi4_6") return parse_sentence(phi4Text({5, 6}));
  if (name == "phi4_5")
    return parse_sentence("A x E y A z E w . (z = x -> (x < w < y | y < w < x)) & (z = y -> (x < y < w | y < x))");
  if (name == "phi5") return parse_sentence(phi5Text());
  if (name == "phi6") return parse_sentence(phi6Text());
  if (name == "chain") return parse_sentence(chainText(r));
  throw UsageError("unknown sentence '" + name + "'");
}

std::vector<std::string> library_names() {
  std::vector<std::string> out;
  for (const auto& [n, t] : thresholds()) out.push_back(n);
  out.push_back("chain");
  return out;
}

int library_threshold(const std::string& name, int r) {
  if (name == "chain") {
    if (r < 1) throw DomainError("chain needs r >= 1");
    return r;
  }
  auto it = thresholds().find(name);
  if (it == thresholds().end()) throw UsageError("unknown sentence '" + name + "'");
  return it->second;
}

}  // namespace msgames
