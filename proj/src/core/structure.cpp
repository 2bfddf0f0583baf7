#include "msgames/structure.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "msgames/structure_spec.hpp"

namespace msgames {

int Vocabulary::relationIndex(std::string_view name) const {
  for (std::size_t i = 0; i < relations.size(); ++i)
    if (relations[i].first == name) return static_cast<int>(i);
  return -1;
}

int Vocabulary::constantIndex(std::string_view name) const {
  for (std::size_t i = 0; i < constants.size(); ++i)
    if (constants[i] == name) return static_cast<int>(i);
  return -1;
}

void Vocabulary::validate() const {
  std::set<std::string> seen;
  for (const auto& [name, arity] : relations) {
    if (name.empty()) throw UsageError("relation name must be non-empty");
    if (arity < 1) throw UsageError("relation '" + name + "' must have arity >= 1");
    if (!seen.insert(name).second) throw UsageError("duplicate symbol '" + name + "'");
  }
  for (const auto& name : constants) {
    if (name.empty()) throw UsageError("constant name must be non-empty");
    if (!seen.insert(name).second) throw UsageError("duplicate symbol '" + name + "'");
  }
  if (hasAtomPredicate) {
    int idx = relationIndex("atom");
    if (idx < 0 || relations[idx].second != 1)
      throw UsageError("atom predicate flag requires a unary relation named 'atom'");
  }
}

Vocabulary linear_order_vocabulary() {
  Vocabulary v;
  v.relations = {{"<", 2}};
  return v;
}

Structure::Structure(int universe, Vocabulary vocabulary, std::vector<std::vector<Tuple>> relations,
                     std::vector<int> constants)
    : n_(universe), voc_(std::move(vocabulary)), tuples_(std::move(relations)),
      constants_(std::move(constants)) {
  if (n_ <= 0) throw DomainError("universe must be non-empty");
  if (n_ > 32767) throw UsageError("universe too large");
  voc_.validate();
  if (tuples_.size() != voc_.relations.size())
    throw UsageError("relation count does not match vocabulary");
  if (constants_.size() != voc_.constants.size())
    throw UsageError("constant count does not match vocabulary");
  for (int c : constants_)
    if (c < 0 || c >= n_) throw UsageError("constant index out of range");
  dense_.resize(tuples_.size());
  for (std::size_t r = 0; r < tuples_.size(); ++r) {
    const int k = voc_.relations[r].second;
    for (const auto& t : tuples_[r]) {
      if (static_cast<int>(t.size()) != k)
        throw UsageError("tuple arity mismatch in relation '" + voc_.relations[r].first + "'");
      for (int e : t)
        if (e < 0 || e >= n_) throw UsageError("tuple index out of range");
    }
    std::sort(tuples_[r].begin(), tuples_[r].end());
    tuples_[r].erase(std::unique(tuples_[r].begin(), tuples_[r].end()), tuples_[r].end());
    if (k <= 3) {
      std::size_t cells = 1;
      for (int i = 0; i < k; ++i) cells *= static_cast<std::size_t>(n_);
      if (cells <= (1u << 24)) {
        dense_[r].assign(cells, 0);
        for (const auto& t : tuples_[r]) {
          std::size_t idx = 0;
          for (int e : t) idx = idx * n_ + e;
          dense_[r][idx] = 1;
        }
      }
    }
  }
  if (voc_ == linear_order_vocabulary() &&
      tuples_[0].size() == static_cast<std::size_t>(n_) * (n_ - 1) / 2) {
    linear_ = std::all_of(tuples_[0].begin(), tuples_[0].end(),
                          [](const Tuple& t) { return t[0] < t[1]; });
  }
}

bool Structure::holds(int rel, const int* args) const {
  const int k = voc_.relations[rel].second;
  if (linear_) return args[0] < args[1];
  if (!dense_[rel].empty()) {
    std::size_t idx = 0;
    for (int i = 0; i < k; ++i) idx = idx * n_ + args[i];
    return dense_[rel][idx] != 0;
  }
  Tuple t(args, args + k);
  return std::binary_search(tuples_[rel].begin(), tuples_[rel].end(), t);
}

std::string Structure::describe() const {
  if (linear_) return "lo:" + std::to_string(n_);
  return structure_to_json(*this);
}

StructurePtr make_linear_order(int n) {
  if (n <= 0) throw DomainError("linear order needs at least one element");
  std::vector<Tuple> less;
  less.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) less.push_back({i, j});
  return std::make_shared<const Structure>(n, linear_order_vocabulary(),
                                           std::vector<std::vector<Tuple>>{std::move(less)});
}

std::string Selection::token() const {
  return isAtom() ? "a" + std::to_string(index() + 1) : std::to_string(index() + 1);
}

Selection Selection::parseToken(std::string_view token) {
  bool atom = !token.empty() && (token[0] == 'a' || token[0] == 'A');
  std::string_view digits = atom ? token.substr(1) : token;
  int value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || value < 1)
    throw UsageError("bad selection token '" + std::string(token) + "'");
  return atom ? Selection::atom(value - 1) : Selection::element(value - 1);
}

Board::Board(StructurePtr base, bool atoms) : base_(std::move(base)), atoms_(atoms) {
  if (!base_) throw UsageError("board needs a structure");
}

bool Board::isSelected(int element) const {
  for (int i = 0; i < len_; ++i)
    if (hist_[i] == element) return true;
  return false;
}

bool Board::validSelection(Selection s) const {
  if (s.isAtom()) return atoms_ && s.index() <= ledger_ && s.index() < 120;
  return s.index() < base_->size();
}

Board extend(const Board& b, Selection s) {
  if (b.len_ >= Board::kMaxHistory) throw UsageError("board history is full");
  if (s.isAtom()) {
    if (!b.atoms_) throw UsageError("atom selection in a game without atoms");
    if (s.index() > b.ledger_) throw UsageError("atom id skips the fresh atom");
  } else if (s.index() >= b.base_->size()) {
    throw UsageError("element index out of range");
  }
  Board out = b;
  out.hist_[out.len_++] = static_cast<std::int16_t>(s.code());
  if (s.isAtom() && s.index() == b.ledger_) ++out.ledger_;
  return out;
}

Board reflect(const Board& b) {
  Board out = b;
  const int n = b.base_->size();
  for (int i = 0; i < b.len_; ++i)
    if (out.hist_[i] >= 0) out.hist_[i] = static_cast<std::int16_t>(n - 1 - out.hist_[i]);
  return out;
}

namespace {

void requireComparable(const Board& a, const Board& b) {
  if (a.length() != b.length()) throw UsageError("boards have different history lengths");
  if (a.basePtr() != b.basePtr() && a.base().vocabulary() != b.base().vocabulary())
    throw UsageError("boards have different vocabularies");
}

bool partialIsoLinear(const Board& a, const Board& b) {
  const int len = a.length();
  int av[Board::kMaxHistory], bv[Board::kMaxHistory];
  for (int i = 0; i < len; ++i) {
    av[i] = a.at(i).code();
    bv[i] = b.at(i).code();
    if ((av[i] < 0) != (bv[i] < 0)) return false;
    if (av[i] < 0 && av[i] != bv[i]) return false;
  }
  for (int i = 0; i < len; ++i) {
    if (av[i] < 0) continue;
    for (int j = i + 1; j < len; ++j) {
      if (av[j] < 0) continue;
      int sa = (av[i] > av[j]) - (av[i] < av[j]);
      int sb = (bv[i] > bv[j]) - (bv[i] < bv[j]);
      if (sa != sb) return false;
    }
  }
  return true;
}

bool partialIsoGeneral(const Board& a, const Board& b) {
  const Structure& sa = a.base();
  const Structure& sb = b.base();
  std::vector<int> pa, pb;  // codes: element >= 0, atom < 0
  for (int i = 0; i < a.length(); ++i) {
    pa.push_back(a.at(i).code());
    pb.push_back(b.at(i).code());
  }
  for (int c = 0; c < sa.constantCount(); ++c) {
    pa.push_back(sa.constant(c));
    pb.push_back(sb.constant(c));
  }
  const int p = static_cast<int>(pa.size());
  for (int i = 0; i < p; ++i) {
    if ((pa[i] < 0) != (pb[i] < 0)) return false;
    if (pa[i] < 0 && pa[i] != pb[i]) return false;
    for (int j = i + 1; j < p; ++j)
      if ((pa[i] == pa[j]) != (pb[i] == pb[j])) return false;
  }
  std::vector<int> idx;
  int argsA[16], argsB[16];
  for (int r = 0; r < sa.relationCount(); ++r) {
    const int k = sa.arity(r);
    if (k > 16) throw UsageError("relation arity above 16 is unsupported");
    idx.assign(k, 0);
    if (p == 0) continue;
    while (true) {
      bool atom = false;
      for (int i = 0; i < k; ++i) {
        argsA[i] = pa[idx[i]];
        argsB[i] = pb[idx[i]];
        atom = atom || argsA[i] < 0;
      }
      if (!atom && sa.holds(r, argsA) != sb.holds(r, argsB)) return false;
      int pos = k - 1;
      while (pos >= 0 && ++idx[pos] == p) idx[pos--] = 0;
      if (pos < 0) break;
    }
  }
  return true;
}

}  // namespace

bool partial_iso(const Board& a, const Board& b) {
  requireComparable(a, b);
  if (a.isLinearOrder() && b.isLinearOrder()) return partialIsoLinear(a, b);
  return partialIsoGeneral(a, b);
}

std::string describe(const Board& b) {
  std::string out = b.base().describe() + " [";
  for (int i = 0; i < b.length(); ++i) {
    if (i) out += ", ";
    out += b.at(i).token();
  }
  return out + "]";
}

}  // namespace msgames
