#include <algorithm>
#include <map>
#include <unordered_map>

#include "msgames/sentence.hpp"

namespace msgames {

namespace {

// Term after name resolution: a variable slot or a fixed domain value.
struct Term {
  bool isVar;
  int value;
};

struct CNode {
  NodeKind kind;
  int slot = -1;  // quantifier variable slot
  int rel = -1;   // relation index for Rel, "<" for Less, "atom" for AtomPred
  int rank = 0;
  int id = 0;
  std::vector<CNode*> kids;
  std::vector<Term> terms;
  std::vector<int> freeSlots;  // sorted, quantifier nodes only
};

class Evaluator {
 public:
  Evaluator(const Model& m, bool memo) : m_(m), s_(*m.structure), n_(m.structure->size()) {
    domain_ = n_ + m.atoms;
    memo_ = memo && s_.isLinearOrder() && m.atoms == 0 && m.named.empty();
  }

  bool run(const Sentence& s) {
    std::vector<std::pair<std::string, int>> scope;
    std::vector<int> freeSlots;
    CNode* root = compile(s, scope, 0, freeSlots);
    if (!freeSlots.empty()) throw UsageError("sentence has free variables");
    env_.assign(maxSlot_ + 1, 0);
    tables_.resize(nodes_.size());
    return evalNode(root);
  }

 private:
  CNode* compile(const Sentence& s, std::vector<std::pair<std::string, int>>& scope, int depth,
                 std::vector<int>& freeOut) {
    nodes_.push_back(std::make_unique<CNode>());
    CNode* c = nodes_.back().get();
    c->kind = s->kind;
    c->id = static_cast<int>(nodes_.size()) - 1;
    std::vector<int> freeHere;
    auto addFree = [&](int slot) {
      if (std::find(freeHere.begin(), freeHere.end(), slot) == freeHere.end()) freeHere.push_back(slot);
    };
    switch (s->kind) {
      case NodeKind::Exists:
      case NodeKind::Forall: {
        c->slot = depth;
        maxSlot_ = std::max(maxSlot_, depth);
        scope.emplace_back(s->name, depth);
        std::vector<int> kidFree;
        c->kids.push_back(compile(s->kids[0], scope, depth + 1, kidFree));
        scope.pop_back();
        for (int v : kidFree)
          if (v != depth) addFree(v);
        c->rank = c->kids[0]->rank + 1;
        std::sort(freeHere.begin(), freeHere.end());
        c->freeSlots = freeHere;
        break;
      }
      default: {
        for (const auto& k : s->kids) {
          std::vector<int> kidFree;
          c->kids.push_back(compile(k, scope, depth, kidFree));
          c->rank = std::max(c->rank, c->kids.back()->rank);
          for (int v : kidFree) addFree(v);
        }
        for (const auto& t : s->terms) {
          c->terms.push_back(resolve(t, scope));
          if (c->terms.back().isVar) addFree(c->terms.back().value);
        }
        const Vocabulary& voc = s_.vocabulary();
        if (s->kind == NodeKind::Less) {
          c->rel = voc.relationIndex("<");
          if (c->rel < 0 || s_.arity(c->rel) != 2) throw UsageError("'<' is not interpreted in this structure");
        } else if (s->kind == NodeKind::AtomPred) {
          c->rel = voc.relationIndex("atom");
          if (c->rel >= 0 && s_.arity(c->rel) != 1) c->rel = -1;
        } else if (s->kind == NodeKind::Rel) {
          c->rel = voc.relationIndex(s->name);
          if (c->rel < 0) throw UsageError("relation '" + s->name + "' is not interpreted in this structure");
          if (s_.arity(c->rel) != static_cast<int>(s->terms.size()))
            throw UsageError("relation '" + s->name + "' used with the wrong arity");
        }
      }
    }
    freeOut = freeHere;
    return c;
  }

  Term resolve(const std::string& name, const std::vector<std::pair<std::string, int>>& scope) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == name) return {true, it->second};
    for (const auto& [n, v] : m_.named)
      if (n == name) return {false, v};
    int c = s_.vocabulary().constantIndex(name);
    if (c >= 0) return {false, s_.constant(c)};
    throw UsageError("symbol '" + name + "' is not interpreted in this structure");
  }

  int value(const Term& t) const { return t.isVar ? env_[t.value] : t.value; }

  bool evalNode(const CNode* c) {
    switch (c->kind) {
      case NodeKind::Exists:
      case NodeKind::Forall: return quantifier(c);
      case NodeKind::And:
        for (const CNode* k : c->kids)
          if (!evalNode(k)) return false;
        return true;
      case NodeKind::Or:
        for (const CNode* k : c->kids)
          if (evalNode(k)) return true;
        return false;
      case NodeKind::Not: return !evalNode(c->kids[0]);
      case NodeKind::Implies: return !evalNode(c->kids[0]) || evalNode(c->kids[1]);
      case NodeKind::Eq: return value(c->terms[0]) == value(c->terms[1]);
      case NodeKind::Less:
      case NodeKind::Rel: {
        int args[8];
        const int k = static_cast<int>(c->terms.size());
        if (k > 8) throw UsageError("relation arity above 8");
        for (int i = 0; i < k; ++i) {
          args[i] = value(c->terms[i]);
          if (args[i] >= n_) return false;
        }
        return s_.holds(c->rel, args);
      }
      case NodeKind::AtomPred: {
        int v = value(c->terms[0]);
        if (v >= n_) return true;
        return c->rel >= 0 && s_.holds(c->rel, &v);
      }
    }
    return false;
  }

  bool quantifier(const CNode* c) {
    std::string key;
    if (memo_) {
      key = memoKey(c);
      auto& table = tables_[c->id];
      auto it = table.find(key);
      if (it != table.end()) return it->second;
    }
    const bool exists = c->kind == NodeKind::Exists;
    bool result = !exists;
    const int saved = env_[c->slot];
    for (int v = 0; v < domain_; ++v) {
      env_[c->slot] = v;
      if (evalNode(c->kids[0]) == exists) {
        result = exists;
        break;
      }
    }
    env_[c->slot] = saved;
    if (memo_) tables_[c->id].emplace(std::move(key), result);
    return result;
  }

  // On a plain linear order, the truth of a subformula of rank q depends only
  // on the order pattern of its free variables and on the gaps between them
  // up to 2^q - 1 (the E-F bound for linear orders).
  std::string memoKey(const CNode* c) const {
    const long cap = c->rank >= 30 ? (1L << 30) : (1L << c->rank) - 1;
    std::vector<int> vals;
    for (int s : c->freeSlots) vals.push_back(env_[s]);
    std::vector<int> sorted = vals;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::string key;
    auto put = [&](long x) {
      for (int i = 0; i < 4; ++i) key.push_back(static_cast<char>((x >> (8 * i)) & 255));
    };
    for (int v : vals) put(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    long prev = -1;
    for (int v : sorted) {
      put(std::min<long>(v - prev - 1, cap));
      prev = v;
    }
    put(std::min<long>(n_ - prev - 1, cap));
    return key;
  }

  const Model& m_;
  const Structure& s_;
  int n_;
  int domain_;
  bool memo_;
  int maxSlot_ = 0;
  std::vector<int> env_;
  std::vector<std::unique_ptr<CNode>> nodes_;
  std::vector<std::unordered_map<std::string, bool>> tables_;
};

}  // namespace

bool eval(const Sentence& s, const Model& m, const EvalOptions& options) {
  if (!m.structure) throw UsageError("model without a structure");
  return Evaluator(m, options.memo).run(s);
}

bool eval(const Sentence& s, const Structure& m, const EvalOptions& options) {
  return eval(s, Model{&m, 0, {}}, options);
}

std::string history_constant(int round) { return "c" + std::to_string(round + 1); }

Model board_model(const Board& b, int freshAtoms) {
  Model m{&b.base(), b.atomLedger() + freshAtoms, {}};
  const int n = b.base().size();
  for (int i = 0; i < b.length(); ++i) {
    Selection s = b.at(i);
    m.named.emplace_back(history_constant(i), s.isAtom() ? n + s.index() : s.index());
  }
  return m;
}

}  // namespace msgames
