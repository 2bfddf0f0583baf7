#include <set>

#include "msgames/sentence.hpp"

namespace msgames {

namespace {

// Complete atomic type of a board over the terms: structure constants, the
// selections made before the certificate (c1..), then the certificate's
// rounds (x1..). Values: elements as indices, atoms as n + id.
Sentence atomicType(const Board& b, int before, bool atomLiterals) {
  const Structure& s = b.base();
  const int n = s.size();
  std::vector<std::string> names;
  std::vector<int> vals;
  for (int c = 0; c < s.constantCount(); ++c) {
    names.push_back(s.vocabulary().constants[c]);
    vals.push_back(s.constant(c));
  }
  for (int i = 0; i < b.length(); ++i) {
    names.push_back(i < before ? history_constant(i) : "x" + std::to_string(i - before + 1));
    Selection sel = b.at(i);
    vals.push_back(sel.isAtom() ? n + sel.index() : sel.index());
  }
  const int t = static_cast<int>(vals.size());
  std::vector<Sentence> lits;
  if (atomLiterals)
    for (int i = 0; i < t; ++i) {
      int v = vals[i];
      bool isAtom = v >= n;
      if (!isAtom && s.vocabulary().hasAtomPredicate) {
        int rel = s.vocabulary().relationIndex("atom");
        isAtom = s.holds(rel, &v);
      }
      lits.push_back(isAtom ? build::atom(names[i]) : build::neg(build::atom(names[i])));
    }
  if (s.isLinearOrder()) {
    for (int i = 0; i < t; ++i)
      for (int j = i + 1; j < t; ++j) {
        const bool ai = vals[i] >= n, aj = vals[j] >= n;
        if (ai != aj) continue;  // settled by the atom literals
        if (vals[i] == vals[j]) lits.push_back(build::eq(names[i], names[j]));
        else if (ai) lits.push_back(build::neg(build::eq(names[i], names[j])));
        else if (vals[i] < vals[j]) lits.push_back(build::less(names[i], names[j]));
        else lits.push_back(build::less(names[j], names[i]));
      }
  } else {
    for (int i = 0; i < t; ++i)
      for (int j = i + 1; j < t; ++j)
        lits.push_back(vals[i] == vals[j] ? build::eq(names[i], names[j])
                                          : build::neg(build::eq(names[i], names[j])));
    for (int r = 0; r < s.relationCount(); ++r) {
      const std::string& rel = s.vocabulary().relations[r].first;
      if (rel == "atom" && s.vocabulary().hasAtomPredicate && atomLiterals) continue;
      const int k = s.arity(r);
      std::vector<int> idx(k, 0);
      while (true) {
        std::vector<int> args(k);
        std::vector<std::string> terms(k);
        bool onAtom = false;
        for (int q = 0; q < k; ++q) {
          args[q] = vals[idx[q]];
          terms[q] = names[idx[q]];
          onAtom |= args[q] >= n;
        }
        if (!onAtom) {
          Sentence lit = build::rel(rel, terms);
          lits.push_back(s.holds(r, args.data()) ? lit : build::neg(lit));
        }
        int q = k - 1;
        while (q >= 0 && ++idx[q] == t) idx[q--] = 0;
        if (q < 0) break;
      }
    }
  }
  if (lits.empty()) throw UsageError("cannot describe a board with no terms");
  return build::conj(std::move(lits));
}

}  // namespace

Sentence synthesize(const SpoilerCertificate& cert, const GameState& state) {
  if (!replay_certificate(state, cert)) throw UsageError("certificate does not win from this state");
  // Replay without pruning: boards the plan leaves out (dead ones) take their
  // first legal selection, so every side-A leaf of the full game tree is
  // described by the matrix.
  std::vector<Board> a = state.sideA, b = state.sideB;
  const int before = a.empty() ? 0 : a.front().length();
  const int k = static_cast<int>(cert.rounds.size());
  auto play = [&](const RoundPlan& plan, std::vector<Board>& boards) {
    std::vector<Board> out;
    for (const Board& x : boards) {
      CanonicalForm form = canonical_form(x);
      auto it = plan.moves.find(form.key);
      Selection sel;
      if (it != plan.moves.end()) {
        sel = from_canonical(form, it->second);
      } else {
        std::vector<Selection> legal = legal_selections(x, state.variant);
        sel = legal.empty() ? x.candidate(0) : legal.front();
      }
      out.push_back(extend(x, sel));
    }
    boards = std::move(out);
  };
  for (const RoundPlan& plan : cert.rounds) {
    if (plan.side == Side::A) {
      play(plan, a);
      b = duplicator_expand(b, state.variant);
    } else {
      play(plan, b);
      a = duplicator_expand(a, state.variant);
    }
  }
  bool atomLiterals = state.variant.atoms;
  for (const Board& x : a) atomLiterals |= x.base().vocabulary().hasAtomPredicate;
  std::vector<Sentence> disjuncts;
  std::set<std::string> seen;
  for (const Board& x : a) {
    Sentence t = atomicType(x, before, atomLiterals);
    if (seen.insert(render(t)).second) disjuncts.push_back(t);
  }
  Sentence phi = build::disj(std::move(disjuncts));
  for (int i = k - 1; i >= 0; --i) {
    std::string var = "x" + std::to_string(i + 1);
    phi = cert.rounds[i].side == Side::A ? build::exists(var, phi) : build::forall(var, phi);
  }
  const int fresh = state.variant.atoms ? k : 0;
  for (const Board& x : state.sideA)
    if (!eval(phi, board_model(x, fresh))) throw std::logic_error("synthesized sentence fails on side A");
  for (const Board& x : state.sideB)
    if (eval(phi, board_model(x, fresh))) throw std::logic_error("synthesized sentence holds on side B");
  return phi;
}

}  // namespace msgames
