#include <algorithm>
#include <cstring>
#include <numeric>

#include "msgames/structure.hpp"

namespace msgames {

namespace {

constexpr long kLeafCap = 200000;

void putInt(std::string& out, int v) {
  unsigned u = static_cast<unsigned>(v);
  char bytes[4];
  std::memcpy(bytes, &u, 4);
  out.append(bytes, 4);
}

std::string linearKey(const Board& b) {
  std::string key;
  key.reserve(4 + 2 * b.length());
  key.push_back('L');
  const int n = b.base().size();
  key.push_back(static_cast<char>(n & 0xff));
  key.push_back(static_cast<char>((n >> 8) & 0xff));
  key.push_back(static_cast<char>(b.length()));
  for (int i = 0; i < b.length(); ++i) {
    int c = b.at(i).code();
    key.push_back(static_cast<char>(c & 0xff));
    key.push_back(static_cast<char>((c >> 8) & 0xff));
  }
  return key;
}

class Canonizer {
 public:
  explicit Canonizer(const Board& b) : b_(b), s_(b.base()), n_(s_.size()) {
    for (int r = 0; r < s_.relationCount(); ++r)
      for (const auto& t : s_.tuples(r))
        for (std::size_t p = 0; p < t.size(); ++p)
          if (std::find(t.begin(), t.begin() + p, t[p]) == t.begin() + p)
            incident_[t[p]].push_back({r, &t});
  }

  CanonicalForm run() {
    std::vector<std::vector<int>> sig(n_);
    for (int e = 0; e < n_; ++e) {
      for (int i = 0; i < b_.length(); ++i) sig[e].push_back(b_.at(i).code() == e);
      for (int c = 0; c < s_.constantCount(); ++c) sig[e].push_back(s_.constant(c) == e);
    }
    std::vector<int> colors = rank(sig);
    refine(colors);
    search(colors);
    CanonicalForm form;
    form.key = header() + best_;
    form.label = bestLabel_;
    form.unlabel.assign(n_, 0);
    for (int e = 0; e < n_; ++e) form.unlabel[form.label[e]] = e;
    return form;
  }

 private:
  struct Incidence {
    int rel;
    const Tuple* tuple;
  };

  static std::vector<int> rank(const std::vector<std::vector<int>>& sig) {
    std::vector<int> order(sig.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return sig[x] < sig[y]; });
    std::vector<int> colors(sig.size());
    int c = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0 && sig[order[i]] != sig[order[i - 1]]) ++c;
      colors[order[i]] = c;
    }
    return colors;
  }

  static int countColors(const std::vector<int>& colors) {
    return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
  }

  void refine(std::vector<int>& colors) const {
    int count = countColors(colors);
    while (true) {
      std::vector<std::vector<int>> sig(n_);
      for (int e = 0; e < n_; ++e) {
        std::vector<std::vector<int>> parts;
        for (const auto& inc : incident_[e]) {
          std::vector<int> part{inc.rel};
          for (int x : *inc.tuple) part.push_back(x == e ? -1 : colors[x]);
          parts.push_back(std::move(part));
        }
        std::sort(parts.begin(), parts.end());
        sig[e].push_back(colors[e]);
        for (auto& part : parts) {
          sig[e].push_back(static_cast<int>(part.size()));
          sig[e].insert(sig[e].end(), part.begin(), part.end());
        }
      }
      colors = rank(sig);
      int next = countColors(colors);
      if (next == count) return;
      count = next;
    }
  }

  std::string encode(const std::vector<int>& label) const {
    std::string out;
    for (int r = 0; r < s_.relationCount(); ++r) {
      std::vector<Tuple> mapped;
      mapped.reserve(s_.tuples(r).size());
      for (const auto& t : s_.tuples(r)) {
        Tuple m(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) m[i] = label[t[i]];
        mapped.push_back(std::move(m));
      }
      std::sort(mapped.begin(), mapped.end());
      putInt(out, static_cast<int>(mapped.size()));
      for (const auto& t : mapped)
        for (int x : t) putInt(out, x);
    }
    for (int c = 0; c < s_.constantCount(); ++c) putInt(out, label[s_.constant(c)]);
    for (int i = 0; i < b_.length(); ++i) {
      int code = b_.at(i).code();
      putInt(out, code >= 0 ? label[code] : code);
    }
    return out;
  }

  std::string header() const {
    std::string h = "G";
    putInt(h, n_);
    putInt(h, b_.length());
    for (const auto& [name, arity] : s_.vocabulary().relations) {
      h += name;
      h.push_back('\0');
      putInt(h, arity);
    }
    h.push_back('\1');
    for (const auto& name : s_.vocabulary().constants) {
      h += name;
      h.push_back('\0');
    }
    h.push_back(s_.vocabulary().hasAtomPredicate ? '\3' : '\2');
    return h;
  }

  void search(const std::vector<int>& colors) {
    if (++leaves_ > kLeafCap) throw BudgetExceeded("canonization leaf cap exceeded");
    const int count = countColors(colors);
    if (count == n_) {
      std::string enc = encode(colors);
      if (bestLabel_.empty() || enc < best_) {
        best_ = std::move(enc);
        bestLabel_ = colors;
      }
      return;
    }
    std::vector<int> size(count, 0);
    for (int c : colors) ++size[c];
    int target = 0;
    while (size[target] < 2) ++target;
    for (int v = 0; v < n_; ++v) {
      if (colors[v] != target) continue;
      std::vector<std::vector<int>> sig(n_);
      for (int e = 0; e < n_; ++e)
        sig[e] = {2 * colors[e] + (colors[e] == target && e != v ? 1 : 0)};
      std::vector<int> next = rank(sig);
      refine(next);
      search(next);
    }
  }

  const Board& b_;
  const Structure& s_;
  int n_;
  std::vector<std::vector<Incidence>> incident_ = std::vector<std::vector<Incidence>>(n_);
  std::string best_;
  std::vector<int> bestLabel_;
  long leaves_ = 0;
};

}  // namespace

CanonicalKey canonical_key(const Board& b) {
  if (b.isLinearOrder()) return linearKey(b);
  return Canonizer(b).run().key;
}

CanonicalForm canonical_form(const Board& b) {
  if (b.isLinearOrder()) {
    CanonicalForm form;
    form.key = linearKey(b);
    form.label.resize(b.base().size());
    std::iota(form.label.begin(), form.label.end(), 0);
    form.unlabel = form.label;
    return form;
  }
  return Canonizer(b).run();
}

Selection to_canonical(const CanonicalForm& form, Selection s) {
  return s.isAtom() ? s : Selection::element(form.label.at(s.index()));
}

Selection from_canonical(const CanonicalForm& form, Selection s) {
  return s.isAtom() ? s : Selection::element(form.unlabel.at(s.index()));
}

}  // namespace msgames
