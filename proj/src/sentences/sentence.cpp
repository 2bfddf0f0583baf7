#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "msgames/sentence.hpp"

namespace msgames {

namespace build {

namespace {
Sentence make(NodeKind kind, std::string name, std::vector<Sentence> kids, std::vector<std::string> terms) {
  return std::make_shared<const Node>(Node{kind, std::move(name), std::move(kids), std::move(terms)});
}
}  // namespace

Sentence exists(std::string var, Sentence body) { return make(NodeKind::Exists, std::move(var), {std::move(body)}, {}); }
Sentence forall(std::string var, Sentence body) { return make(NodeKind::Forall, std::move(var), {std::move(body)}, {}); }
Sentence conj(std::vector<Sentence> kids) {
  if (kids.size() == 1) return kids[0];
  if (kids.empty()) throw UsageError("empty conjunction");
  return make(NodeKind::And, "", std::move(kids), {});
}
Sentence disj(std::vector<Sentence> kids) {
  if (kids.size() == 1) return kids[0];
  if (kids.empty()) throw UsageError("empty disjunction");
  return make(NodeKind::Or, "", std::move(kids), {});
}
Sentence neg(Sentence kid) { return make(NodeKind::Not, "", {std::move(kid)}, {}); }
Sentence implies(Sentence lhs, Sentence rhs) { return make(NodeKind::Implies, "", {std::move(lhs), std::move(rhs)}, {}); }
Sentence less(std::string a, std::string b) { return make(NodeKind::Less, "", {}, {std::move(a), std::move(b)}); }
Sentence eq(std::string a, std::string b) { return make(NodeKind::Eq, "", {}, {std::move(a), std::move(b)}); }
Sentence atom(std::string a) { return make(NodeKind::AtomPred, "", {}, {std::move(a)}); }
Sentence rel(std::string name, std::vector<std::string> terms) {
  return make(NodeKind::Rel, std::move(name), {}, std::move(terms));
}

}  // namespace build

bool same_sentence(const Sentence& a, const Sentence& b) {
  if (a->kind != b->kind || a->name != b->name || a->terms != b->terms || a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!same_sentence(a->kids[i], b->kids[i])) return false;
  return true;
}

namespace {

bool isQuantifier(NodeKind k) { return k == NodeKind::Exists || k == NodeKind::Forall; }

bool alphaEq(const Sentence& a, const Sentence& b, std::map<std::string, std::string>& ab,
             std::map<std::string, std::string>& ba) {
  if (a->kind != b->kind || a->kids.size() != b->kids.size() || a->terms.size() != b->terms.size())
    return false;
  if (isQuantifier(a->kind)) {
    auto saveAb = ab.find(a->name) != ab.end() ? std::optional(ab[a->name]) : std::nullopt;
    auto saveBa = ba.find(b->name) != ba.end() ? std::optional(ba[b->name]) : std::nullopt;
    ab[a->name] = b->name;
    ba[b->name] = a->name;
    bool ok = alphaEq(a->kids[0], b->kids[0], ab, ba);
    if (saveAb) ab[a->name] = *saveAb; else ab.erase(a->name);
    if (saveBa) ba[b->name] = *saveBa; else ba.erase(b->name);
    return ok;
  }
  if (a->kind == NodeKind::Rel && a->name != b->name) return false;
  for (std::size_t i = 0; i < a->terms.size(); ++i) {
    auto ia = ab.find(a->terms[i]);
    auto ib = ba.find(b->terms[i]);
    if (ia == ab.end() && ib == ba.end()) {
      if (a->terms[i] != b->terms[i]) return false;
    } else if (ia == ab.end() || ib == ba.end() || ia->second != b->terms[i]) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!alphaEq(a->kids[i], b->kids[i], ab, ba)) return false;
  return true;
}

}  // namespace

bool alpha_equivalent(const Sentence& a, const Sentence& b) {
  std::map<std::string, std::string> ab, ba;
  return alphaEq(a, b, ab, ba);
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Less, Eq, Neq, Not, And, Or, Implies, Exists, Forall, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view lit) { return s.substr(i, lit.size()) == lit; };
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    const std::size_t pos = i;
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), pos});
      i = j;
      continue;
    }
    struct Sym {
      std::string_view text;
      Tok kind;
    };
    static const Sym syms[] = {
        {"->", Tok::Implies}, {"!=", Tok::Neq},   {"(", Tok::LParen},     {")", Tok::RParen},
        {",", Tok::Comma},    {".", Tok::Dot},    {"<", Tok::Less},       {"=", Tok::Eq},
        {"!", Tok::Not},      {"&", Tok::And},    {"|", Tok::Or},         {"∃", Tok::Exists},
        {"∀", Tok::Forall}, {"¬", Tok::Not}, {"∧", Tok::And}, {"∨", Tok::Or},
        {"→", Tok::Implies}, {"≠", Tok::Neq},
    };
    bool matched = false;
    for (const auto& sym : syms) {
      if (starts(sym.text)) {
        out.push_back({sym.kind, std::string(sym.text), pos});
        i += sym.text.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxError("unexpected character '" + std::string(1, s[i]) + "'", pos);
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Sentence parseAll() {
    Sentence s = formula();
    if (peek().kind != Tok::End) throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
    return s;
  }

 private:
  const Token& peek(int ahead = 0) const {
    std::size_t idx = std::min(p_ + ahead, t_.size() - 1);
    return t_[idx];
  }
  Token take() { return t_[std::min(p_++, t_.size() - 1)]; }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) throw SyntaxError(std::string("expected ") + what, peek().pos);
    ++p_;
  }

  bool quantifierAhead() const {
    const Token& a = peek();
    if (a.kind == Tok::Exists || a.kind == Tok::Forall) return true;
    return a.kind == Tok::Ident && (a.text == "E" || a.text == "A") && peek(1).kind == Tok::Ident;
  }

  Sentence formula() {
    Sentence lhs = disjunction();
    if (peek().kind == Tok::Implies) {
      ++p_;
      return build::implies(lhs, formula());
    }
    return lhs;
  }

  Sentence disjunction() {
    std::vector<Sentence> kids{conjunction()};
    while (peek().kind == Tok::Or) {
      ++p_;
      kids.push_back(conjunction());
    }
    return build::disj(std::move(kids));
  }

  Sentence conjunction() {
    std::vector<Sentence> kids{unary()};
    while (peek().kind == Tok::And) {
      ++p_;
      kids.push_back(unary());
    }
    return build::conj(std::move(kids));
  }

  Sentence unary() {
    if (peek().kind == Tok::Not) {
      ++p_;
      return build::neg(unary());
    }
    if (quantifierAhead()) return quantified();
    return primary();
  }

  Sentence quantified() {
    std::vector<std::pair<bool, std::string>> block;
    while (quantifierAhead()) {
      Token q = take();
      bool exists = q.kind == Tok::Exists || q.text == "E";
      if (peek().kind != Tok::Ident) throw SyntaxError("expected variable after quantifier", peek().pos);
      block.emplace_back(exists, take().text);
    }
    // "E x . body" scopes as far right as possible; "E x (body)" scopes over
    // the parenthesized formula only.
    Sentence body;
    if (peek().kind == Tok::LParen) {
      body = primary();
    } else {
      expect(Tok::Dot, "'.' or '(' after quantifier block");
      body = formula();
    }
    for (auto it = block.rbegin(); it != block.rend(); ++it)
      body = it->first ? build::exists(it->second, body) : build::forall(it->second, body);
    return body;
  }

  Sentence primary() {
    if (peek().kind == Tok::LParen) {
      ++p_;
      Sentence s = formula();
      expect(Tok::RParen, "')'");
      return s;
    }
    if (peek().kind != Tok::Ident) throw SyntaxError("expected a formula", peek().pos);
    Token first = take();
    if (peek().kind == Tok::LParen) {
      ++p_;
      std::vector<std::string> args;
      if (peek().kind != Tok::RParen) {
        while (true) {
          if (peek().kind != Tok::Ident) throw SyntaxError("expected a term", peek().pos);
          args.push_back(take().text);
          if (peek().kind != Tok::Comma) break;
          ++p_;
        }
      }
      expect(Tok::RParen, "')'");
      if (args.empty()) throw SyntaxError("predicate needs arguments", first.pos);
      if (first.text == "atom") {
        if (args.size() != 1) throw SyntaxError("atom takes one argument", first.pos);
        return build::atom(args[0]);
      }
      return build::rel(first.text, std::move(args));
    }
    std::vector<Sentence> links;
    std::string left = first.text;
    while (peek().kind == Tok::Less || peek().kind == Tok::Eq || peek().kind == Tok::Neq) {
      Tok op = take().kind;
      if (peek().kind != Tok::Ident) throw SyntaxError("expected a term", peek().pos);
      std::string right = take().text;
      if (op == Tok::Less) links.push_back(build::less(left, right));
      else if (op == Tok::Eq) links.push_back(build::eq(left, right));
      else links.push_back(build::neg(build::eq(left, right)));
      left = right;
    }
    if (links.empty()) throw SyntaxError("expected a comparison after '" + first.text + "'", peek().pos);
    return build::conj(std::move(links));
  }

  std::vector<Token> t_;
  std::size_t p_ = 0;
};

// ---------------------------------------------------------------- rendering

int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::Exists:
    case NodeKind::Forall: return 0;
    case NodeKind::Implies: return 1;
    case NodeKind::Or: return 2;
    case NodeKind::And: return 3;
    case NodeKind::Not: return 4;
    default: return 5;
  }
}

std::string joinTerms(const std::vector<std::string>& terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) out += (i ? ", " : "") + terms[i];
  return out;
}

std::string renderNode(const Sentence& s);

std::string wrapped(const Sentence& s, bool paren) { return paren ? "(" + renderNode(s) + ")" : renderNode(s); }

std::string renderNode(const Sentence& s) {
  switch (s->kind) {
    case NodeKind::Exists:
    case NodeKind::Forall: {
      std::string out;
      const Node* n = s.get();
      Sentence body = s;
      while (isQuantifier(body->kind)) {
        out += (body->kind == NodeKind::Exists ? "E " : "A ") + body->name + " ";
        body = body->kids[0];
      }
      (void)n;
      return out + ". " + renderNode(body);
    }
    case NodeKind::And:
    case NodeKind::Or: {
      const int prec = precedence(s->kind);
      std::string out;
      for (std::size_t i = 0; i < s->kids.size(); ++i) {
        if (i) out += s->kind == NodeKind::And ? " & " : " | ";
        out += wrapped(s->kids[i], precedence(s->kids[i]->kind) <= prec);
      }
      return out;
    }
    case NodeKind::Implies:
      return wrapped(s->kids[0], precedence(s->kids[0]->kind) <= 1) + " -> " +
             wrapped(s->kids[1], precedence(s->kids[1]->kind) < 1);
    case NodeKind::Not: {
      const Sentence& k = s->kids[0];
      bool bare = k->kind == NodeKind::Not || k->kind == NodeKind::AtomPred || k->kind == NodeKind::Rel;
      return "!" + wrapped(k, !bare);
    }
    case NodeKind::Less: return s->terms[0] + " < " + s->terms[1];
    case NodeKind::Eq: return s->terms[0] + " = " + s->terms[1];
    case NodeKind::AtomPred: return "atom(" + s->terms[0] + ")";
    case NodeKind::Rel: return s->name + "(" + joinTerms(s->terms) + ")";
  }
  return "";
}

void collectFree(const Sentence& s, std::set<std::string>& bound, std::vector<std::string>& out) {
  if (isQuantifier(s->kind)) {
    bool fresh = bound.insert(s->name).second;
    collectFree(s->kids[0], bound, out);
    if (fresh) bound.erase(s->name);
    return;
  }
  for (const auto& t : s->terms)
    if (!bound.count(t) && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  for (const auto& k : s->kids) collectFree(k, bound, out);
}

}  // namespace

Sentence parse_sentence(std::string_view text) { return Parser(tokenize(text)).parseAll(); }

std::string render(const Sentence& s) { return renderNode(s); }

std::vector<std::string> free_variables(const Sentence& s) {
  std::set<std::string> bound;
  std::vector<std::string> out;
  collectFree(s, bound, out);
  return out;
}

QuantifierProfile quantifier_profile(const Sentence& s) {
  QuantifierProfile p;
  std::function<void(const Sentence&, int&, int&)> walk = [&](const Sentence& n, int& count, int& rank) {
    int c = 0, r = 0;
    for (const auto& k : n->kids) {
      int kc = 0, kr = 0;
      walk(k, kc, kr);
      c += kc;
      r = std::max(r, kr);
    }
    if (isQuantifier(n->kind)) {
      ++c;
      ++r;
    }
    count = c;
    rank = r;
  };
  walk(s, p.count, p.rank);
  std::string prefix;
  Sentence body = s;
  while (isQuantifier(body->kind)) {
    prefix.push_back(body->kind == NodeKind::Exists ? 'E' : 'A');
    body = body->kids[0];
  }
  int bc = 0, br = 0;
  walk(body, bc, br);
  if (bc == 0) p.prefix = prefix;
  return p;
}

}  // namespace msgames
