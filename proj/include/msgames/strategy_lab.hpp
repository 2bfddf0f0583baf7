#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "msgames/ef_solver.hpp"
#include "msgames/ms_solver.hpp"

namespace msgames {

// ---------------------------------------------------------------- traces

// One selection on one board. Spoiler lines name an existing board; a
// Duplicator line names a new copy "<parent>.<selection>" of a board on the
// other side.
struct TraceLine {
  int round = 0;  // 1-based
  Side side = Side::A;
  std::string board;
  Selection selection;
};

struct TraceBoard {
  Side side = Side::A;
  std::string id;
  std::string spec;                 // structure spec, see parse_structure
  std::vector<Selection> history;  // selections made before the trace starts
};

struct Trace {
  Variant variant;
  std::vector<TraceBoard> initial;
  std::vector<TraceLine> lines;
  std::string result;  // "spoiler" or "duplicator", empty when unfinished
};

// Text form: '#' header lines, then one tab-separated line per selection:
// round, side, board id, selection token (1-based). Headers:
//   # variant<TAB>atoms=0<TAB>noPlayOnTop=0
//   # board<TAB>A<TAB>A1<TAB>lo:10[<TAB>3 a1]   (optional prior history)
//   # result<TAB>spoiler
// Spoiler lines name an alive board; Duplicator lines name the new copy.
std::string trace_to_text(const Trace& t);
Trace trace_from_text(const std::string& text);

// Alive boards (id, board) after each round, starting with the initial
// position. Throws UsageError on a malformed trace.
struct TraceFrame {
  int round = 0;
  std::vector<std::pair<std::string, Board>> side[2];
};
std::vector<TraceFrame> replay_trace(const Trace& t);
// Whether some Spoiler line re-selects an element already selected on its board.
bool trace_has_play_on_top(const Trace& t);

// ---------------------------------------------------------------- scripts

// What a Spoiler script sees before its move: alive boards with their ids.
struct MatchView {
  int round = 0;  // 0-based
  int rounds = 0;
  Variant variant;
  const std::vector<Board>* side[2] = {nullptr, nullptr};
  const std::vector<std::vector<int>>* adj[2] = {nullptr, nullptr};  // alive partners
  PairFilter filter;  // extra aliveness condition in force, if any
};

struct SpoilerMove {
  Side side = Side::A;
  std::vector<Selection> selections;  // one per alive board on `side`
};

struct SpoilerScript {
  std::string name;
  std::function<SpoilerMove(const MatchView&)> move;
};

// Duplicator plays `scriptedRounds` rounds with `reply`, then obliviously,
// counting a pair as alive only if `pact` (built from the position at that
// point) also accepts it.
struct DuplicatorScript {
  std::string name;
  int scriptedRounds = 0;
  int copyBound = 1;
  // Replacement selections for each board on the side Spoiler did not move,
  // given the position before the move.
  std::function<std::vector<std::vector<Selection>>(const GameState& before, const SpoilerMove& move)> reply;
  std::function<PairFilter(const GameState& after)> pact;
};

// Names: "ten_v_nine", "middle_recursive", "interlude".
SpoilerScript spoiler_script(const std::string& name);
std::vector<std::string> spoiler_script_names();
// Names: "oblivious", "reduction", "short_side", "naive_mirror", "split_board".
DuplicatorScript duplicator_script(const std::string& name);
std::vector<std::string> duplicator_script_names();

// Plays a certificate move by move (boards looked up by canonical key).
SpoilerScript certificate_script(SpoilerCertificate cert);

// Pact that a selection within the first h elements from one end must be
// answered by the same position from the same end (and vice versa).
PairFilter mirror_pact(int h, bool fromLeft);

struct RunOutcome {
  bool spoilerWins = false;
  Trace trace;
  std::size_t peakBoards = 0;
};

// Spoiler script against the oblivious Duplicator, or against a Duplicator
// script when one is given. Illegal script moves throw ScriptDefect.
RunOutcome run_spoiler(const SpoilerScript& script, const GameState& state,
                       const DuplicatorScript* duplicator = nullptr);

struct CertifyOutcome {
  bool certified = false;
  std::uint64_t nodes = 0;
  std::uint64_t millis = 0;
  std::size_t branches = 0;  // Spoiler lines enumerated through the scripted rounds
  std::optional<SpoilerCertificate> refutation;  // the solver's, covers every round
  std::optional<Trace> refutationTrace;
  std::string refutedBy;  // name of the Spoiler script behind refutationTrace
};

// Every Spoiler line through the scripted rounds, then the exact solver on the
// pact-restricted remainder. When the script is refuted, the refutation trace
// is the first of `preferred` that beats it, else the solver's own line.
CertifyOutcome certify_duplicator(const DuplicatorScript& script, const GameState& state,
                                  const Budget& budget = Budget::fromEnvironment(),
                                  const std::vector<SpoilerScript>& preferred = {});

struct LadderStep {
  int small = 0;
  bool certified = false;
  std::uint64_t nodes = 0;
};

struct LadderReport {
  int from = 0, to = 0, rounds = 0;
  std::vector<LadderStep> steps;  // (K+1, K) for K in [from, to)
  bool complete = false;          // every adjacent pair certified
  std::vector<std::pair<int, int>> implied;  // all pairs covered by transitivity
};

// Certifies each adjacent pair (K+1 vs K) with the script, then chains them.
LadderReport ladder(const DuplicatorScript& script, int from, int to, int rounds, Variant variant,
                    const Budget& budget = Budget::fromEnvironment());

// ---------------------------------------------------------------- E-F

struct EfScript {
  std::string name;
  // Spoiler's move from the current pair of boards with `roundsLeft` to go.
  std::function<std::pair<Side, Selection>(const Board& a, const Board& b, int roundsLeft)> move;
};

// "appendix_a": middle of the larger order, recursing into the side where
// the smaller order is short.
EfScript ef_script(const std::string& name);

struct EfRunOutcome {
  bool spoilerWins = false;
  std::shared_ptr<EfStrategy> witness;  // set when the script wins
  std::size_t lines = 0;                // Duplicator reply sequences explored
};

// Plays the script against every Duplicator reply sequence.
EfRunOutcome run_ef_spoiler(const EfScript& script, const Board& a, const Board& b, int rounds);

}  // namespace msgames
