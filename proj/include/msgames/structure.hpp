#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "msgames/errors.hpp"

namespace msgames {

struct Vocabulary {
  std::vector<std::pair<std::string, int>> relations;  // (name, arity)
  std::vector<std::string> constants;
  // When set, the unary relation named "atom" marks atom-like elements.
  bool hasAtomPredicate = false;

  int relationIndex(std::string_view name) const;
  int constantIndex(std::string_view name) const;
  void validate() const;
  bool operator==(const Vocabulary&) const = default;
};

using Tuple = std::vector<int>;

class Structure {
 public:
  // Tuples and constants are 0-based. Throws DomainError on an empty universe
  // and UsageError on out-of-range indices or arity mismatches.
  Structure(int universe, Vocabulary vocabulary, std::vector<std::vector<Tuple>> relations,
            std::vector<int> constants = {});

  int size() const { return n_; }
  const Vocabulary& vocabulary() const { return voc_; }
  int relationCount() const { return static_cast<int>(tuples_.size()); }
  int arity(int rel) const { return voc_.relations[rel].second; }
  const std::vector<Tuple>& tuples(int rel) const { return tuples_[rel]; }
  int constant(int c) const { return constants_[c]; }
  int constantCount() const { return static_cast<int>(constants_.size()); }
  bool holds(int rel, const int* args) const;

  // Constant-free structure whose only relation is the standard strict order
  // "<" on 0..n-1.
  bool isLinearOrder() const { return linear_; }
  // Spec text that rebuilds this structure ("lo:N" or a JSON document).
  std::string describe() const;

 private:
  int n_;
  Vocabulary voc_;
  std::vector<std::vector<Tuple>> tuples_;  // sorted, unique
  std::vector<int> constants_;
  std::vector<std::vector<std::uint8_t>> dense_;  // n^arity table for arity <= 3
  bool linear_ = false;
};

using StructurePtr = std::shared_ptr<const Structure>;

StructurePtr make_linear_order(int n);
Vocabulary linear_order_vocabulary();

class Selection {
 public:
  Selection() = default;
  static Selection element(int index) { return Selection(index); }
  static Selection atom(int id) { return Selection(-(id + 1)); }
  static Selection fromCode(int code) { return Selection(code); }

  bool isAtom() const { return code_ < 0; }
  int index() const { return code_ >= 0 ? code_ : -code_ - 1; }
  int code() const { return code_; }

  // 1-based user-facing token: "3" for the third element, "a2" for atom id 1.
  std::string token() const;
  static Selection parseToken(std::string_view token);

  auto operator<=>(const Selection&) const = default;

 private:
  explicit Selection(int code) : code_(code) {}
  int code_ = 0;
};

class Board {
 public:
  static constexpr int kMaxHistory = 16;

  Board() = default;
  explicit Board(StructurePtr base, bool atoms = false);

  const Structure& base() const { return *base_; }
  const StructurePtr& basePtr() const { return base_; }
  int length() const { return len_; }
  Selection at(int round) const { return Selection::fromCode(hist_[round]); }
  int atomLedger() const { return ledger_; }
  bool atomsEnabled() const { return atoms_; }
  bool isLinearOrder() const { return base_->isLinearOrder(); }

  // Candidate selections in a fixed order: elements 0..n-1, then atom ids
  // 0..ledger (the last one is fresh) when atoms are enabled.
  int candidateCount() const { return base_->size() + (atoms_ ? ledger_ + 1 : 0); }
  Selection candidate(int c) const {
    return c < base_->size() ? Selection::element(c) : Selection::atom(c - base_->size());
  }
  int candidateIndex(Selection s) const {
    return s.isAtom() ? base_->size() + s.index() : s.index();
  }
  bool isSelected(int element) const;
  bool validSelection(Selection s) const;

  friend Board extend(const Board& b, Selection s);
  friend Board reflect(const Board& b);

 private:
  StructurePtr base_;
  std::array<std::int16_t, kMaxHistory> hist_{};
  std::uint8_t len_ = 0;
  std::uint8_t ledger_ = 0;
  bool atoms_ = false;
};

// Appends one selection. Throws UsageError for out-of-range elements, atoms in
// a non-atom game, atom ids beyond the fresh one, or a full history.
Board extend(const Board& b, Selection s);

// Order reversal of a board over a plain linear order (atoms unchanged).
Board reflect(const Board& b);

bool partial_iso(const Board& a, const Board& b);

using CanonicalKey = std::string;

struct CanonicalForm {
  CanonicalKey key;
  std::vector<int> label;    // element -> canonical position
  std::vector<int> unlabel;  // canonical position -> element
};

CanonicalKey canonical_key(const Board& b);
CanonicalForm canonical_form(const Board& b);

// Selections expressed in canonical coordinates, so that a move chosen on one
// board can be transported to any isomorphic board.
Selection to_canonical(const CanonicalForm& form, Selection s);
Selection from_canonical(const CanonicalForm& form, Selection s);

// Human-readable board, e.g. "lo:4 [2, a1]".
std::string describe(const Board& b);

}  // namespace msgames
