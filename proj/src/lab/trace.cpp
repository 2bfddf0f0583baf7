#include <algorithm>
#include <map>
#include <sstream>

#include "msgames/strategy_lab.hpp"
#include "msgames/structure_spec.hpp"

namespace msgames {

namespace {

std::vector<std::string> splitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

Side parseSide(const std::string& s) {
  if (s == "A") return Side::A;
  if (s == "B") return Side::B;
  throw UsageError("trace: bad side '" + s + "'");
}

bool parseFlag(const std::string& field, const std::string& name) {
  if (field == name + "=1") return true;
  if (field == name + "=0") return false;
  throw UsageError("trace: bad variant field '" + field + "'");
}

}  // namespace

std::string trace_to_text(const Trace& t) {
  std::ostringstream out;
  out << "# variant\tatoms=" << t.variant.atoms << "\tnoPlayOnTop=" << t.variant.noPlayOnTop << "\n";
  for (const TraceBoard& b : t.initial) {
    out << "# board\t" << sideChar(b.side) << "\t" << b.id << "\t" << b.spec;
    if (!b.history.empty()) {
      out << "\t";
      for (std::size_t i = 0; i < b.history.size(); ++i) out << (i ? " " : "") << b.history[i].token();
    }
    out << "\n";
  }
  for (const TraceLine& l : t.lines)
    out << l.round << "\t" << sideChar(l.side) << "\t" << l.board << "\t" << l.selection.token() << "\n";
  if (!t.result.empty()) out << "# result\t" << t.result << "\n";
  return out.str();
}

Trace trace_from_text(const std::string& text) {
  Trace t;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      std::vector<std::string> f = splitTabs(line);
      if (line[0] == '#') {
        if (f[0] == "# variant" && f.size() == 3) {
          t.variant.atoms = parseFlag(f[1], "atoms");
          t.variant.noPlayOnTop = parseFlag(f[2], "noPlayOnTop");
        } else if (f[0] == "# board" && (f.size() == 4 || f.size() == 5)) {
          TraceBoard b{parseSide(f[1]), f[2], f[3], {}};
          if (f.size() == 5) {
            std::istringstream hs(f[4]);
            std::string tok;
            while (hs >> tok) b.history.push_back(Selection::parseToken(tok));
          }
          t.initial.push_back(std::move(b));
        } else if (f[0] == "# result" && f.size() == 2) {
          t.result = f[1];
        }
        continue;  // other comments are ignored
      }
      if (f.size() != 4) throw UsageError("expected 4 tab-separated fields");
      TraceLine l;
      l.round = std::stoi(f[0]);
      l.side = parseSide(f[1]);
      l.board = f[2];
      l.selection = Selection::parseToken(f[3]);
      t.lines.push_back(std::move(l));
    } catch (const std::logic_error& e) {
      throw UsageError("trace line " + std::to_string(lineNo) + ": " + e.what());
    }
  }
  return t;
}

std::vector<TraceFrame> replay_trace(const Trace& t) {
  TraceFrame frame;
  std::map<std::string, int> seen;
  for (const TraceBoard& b : t.initial) {
    if (!seen.emplace(b.id, 0).second) throw UsageError("trace: duplicate board id " + b.id);
    Board board(parse_structure(b.spec), t.variant.atoms);
    for (Selection s : b.history) board = extend(board, s);
    frame.side[index(b.side)].emplace_back(b.id, board);
  }
  std::vector<TraceFrame> frames{frame};
  std::size_t i = 0;
  while (i < t.lines.size()) {
    const int round = t.lines[i].round;
    if (round != frame.round + 1) throw UsageError("trace: rounds must be consecutive from 1");
    std::size_t end = i;
    while (end < t.lines.size() && t.lines[end].round == round) ++end;
    const Side x = t.lines[i].side;
    auto& xs = frame.side[index(x)];
    auto& ys = frame.side[1 - index(x)];
    std::vector<std::pair<std::string, Board>> nx, ny;
    for (std::size_t k = i; k < end; ++k) {
      const TraceLine& l = t.lines[k];
      if (l.side == x) {
        auto it = std::find_if(xs.begin(), xs.end(), [&](const auto& p) { return p.first == l.board; });
        if (it == xs.end()) throw UsageError("trace: Spoiler line names unknown board " + l.board);
        if (!it->second.validSelection(l.selection)) throw UsageError("trace: invalid selection on " + l.board);
        nx.emplace_back(l.board, extend(it->second, l.selection));
      } else {
        const auto dot = l.board.rfind('.');
        if (dot == std::string::npos) throw UsageError("trace: copy id without parent: " + l.board);
        const std::string parent = l.board.substr(0, dot);
        auto it = std::find_if(ys.begin(), ys.end(), [&](const auto& p) { return p.first == parent; });
        if (it == ys.end()) throw UsageError("trace: copy of unknown board " + parent);
        if (!it->second.validSelection(l.selection)) throw UsageError("trace: invalid selection on " + l.board);
        ny.emplace_back(l.board, extend(it->second, l.selection));
      }
    }
    // Spoiler boards that died with this round's move leave the frame, unless
    // every copy died too (the final frame then shows Spoiler's boards).
    if (!ny.empty()) {
      std::erase_if(nx, [&](const auto& p) {
        return std::none_of(ny.begin(), ny.end(), [&](const auto& q) {
          return x == Side::A ? partial_iso(p.second, q.second) : partial_iso(q.second, p.second);
        });
      });
    }
    xs = std::move(nx);
    ys = std::move(ny);
    frame.round = round;
    frames.push_back(frame);
    i = end;
  }
  return frames;
}

bool trace_has_play_on_top(const Trace& t) {
  std::vector<TraceFrame> frames = replay_trace(t);
  for (const TraceLine& l : t.lines) {
    if (l.selection.isAtom()) continue;
    const TraceFrame& before = frames[l.round - 1];
    for (const auto& p : before.side[index(l.side)])
      if (p.first == l.board && p.second.isSelected(l.selection.index())) return true;
  }
  return false;
}

}  // namespace msgames
