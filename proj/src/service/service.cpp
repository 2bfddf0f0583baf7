#include "msgames/service.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "msgames/structure_spec.hpp"

namespace msgames {

using json = nlohmann::json;

namespace {

struct HttpError : std::runtime_error {
  HttpError(int s, const std::string& msg) : std::runtime_error(msg), status(s) {}
  int status;
};

using Boards = std::vector<std::pair<std::string, Board>>;
using Replies = std::map<std::string, std::vector<Selection>>;  // parent id -> copies

const char* roleName(Player p) { return p == Player::Spoiler ? "spoiler" : "duplicator"; }

Player parseRole(const std::string& s) {
  if (s == "spoiler") return Player::Spoiler;
  if (s == "duplicator") return Player::Duplicator;
  throw UsageError("humanRole must be \"spoiler\" or \"duplicator\"");
}

Side parseSideName(const std::string& s) {
  if (s == "A") return Side::A;
  if (s == "B") return Side::B;
  throw UsageError("side must be \"A\" or \"B\"");
}

std::vector<StructurePtr> structuresFrom(const json& j, const char* field) {
  if (j.is_string()) return parse_structure_list(j.get<std::string>());
  if (j.is_object()) return {parse_structure(j.dump())};
  if (!j.is_array() || j.empty()) throw UsageError(std::string("'") + field + "' needs at least one structure");
  std::vector<StructurePtr> out;
  for (const json& e : j) out.push_back(parse_structure(e.is_string() ? e.get<std::string>() : e.dump()));
  return out;
}

bool aliveIn(const Board& b, Side side, const Boards& others) {
  return std::any_of(others.begin(), others.end(), [&](const auto& o) {
    return side == Side::A ? partial_iso(b, o.second) : partial_iso(o.second, b);
  });
}

std::string newToken() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

}  // namespace

// A game whose state is derived from its log: initial boards plus trace lines.
class Session {
 public:
  std::mutex mu;
  std::string id;
  Player human = Player::Spoiler;
  int rounds = 0;
  std::vector<SideConstraint> constraints;
  std::size_t cap = 8;
  Budget budget;
  Trace log;

  // Derived from the log.
  int round = 0;  // completed rounds
  Boards side[2];
  std::optional<std::pair<Side, std::map<std::string, Selection>>> pending;
  json lastEngine;

  Variant variant() const { return log.variant; }
  bool finished() const { return !log.result.empty(); }
  Player toMove() const { return pending ? Player::Duplicator : Player::Spoiler; }

  void rebuild() {
    const std::vector<TraceLine> lines = std::move(log.lines);
    const bool wasFinished = !log.result.empty();
    log.lines.clear();
    log.result.clear();
    round = 0;
    pending.reset();
    side[0].clear();
    side[1].clear();
    for (const TraceBoard& b : log.initial) {
      Board board(parse_structure(b.spec), log.variant.atoms);
      for (Selection s : b.history) board = extend(board, s);
      side[index(b.side)].emplace_back(b.id, board);
    }
    prune();
    std::size_t i = 0;
    while (i < lines.size()) {
      const int r = lines[i].round;
      if (r != round + 1) throw UsageError("session log: rounds must be consecutive from 1");
      const Side x = lines[i].side;
      std::map<std::string, Selection> move;
      Replies replies;
      std::size_t end = i;
      for (; end < lines.size() && lines[end].round == r; ++end) {
        const TraceLine& l = lines[end];
        if (l.side == x) {
          move[l.board] = l.selection;
        } else {
          const auto dot = l.board.rfind('.');
          if (dot == std::string::npos) throw UsageError("session log: copy id without parent: " + l.board);
          replies[l.board.substr(0, dot)].push_back(l.selection);
        }
      }
      spoilerMove(x, move);
      // A last round without copies is either awaiting Duplicator or one in
      // which every copy died; the recorded result tells them apart.
      if (!replies.empty() || end < lines.size() || wasFinished) duplicatorReply(replies);
      i = end;
    }
    settle();
  }

  GameState solverState() const {
    GameState s;
    for (int k = 0; k < 2; ++k)
      for (const auto& [bid, b] : side[k]) (k == 0 ? s.sideA : s.sideB).push_back(b);
    s.roundsLeft = rounds - round;
    s.variant = log.variant;
    if (static_cast<int>(constraints.size()) > round)
      s.constraints.assign(constraints.begin() + round,
                           constraints.begin() + std::min<int>(rounds, static_cast<int>(constraints.size())));
    s.normalize();
    return s;
  }

  SideConstraint constraintNow() const {
    return round < static_cast<int>(constraints.size()) ? constraints[round] : SideConstraint::Free;
  }

  // Legal selections per board on `s`, or nullopt when the side is unavailable.
  std::optional<std::vector<std::vector<Selection>>> legalOn(Side s) const {
    std::vector<std::vector<Selection>> out;
    for (const auto& [bid, b] : side[index(s)]) {
      out.push_back(legal_selections(b, log.variant));
      if (out.back().empty()) return std::nullopt;
    }
    return out;
  }

  bool spoilerStuck() const {
    for (Side s : {Side::A, Side::B})
      if (allows(constraintNow(), s) && legalOn(s)) return false;
    return true;
  }

  void spoilerMove(Side x, const std::map<std::string, Selection>& move) {
    if (pending) throw HttpError(409, "Duplicator has not replied yet");
    if (!allows(constraintNow(), x)) throw UsageError(std::string("round ") + std::to_string(round + 1) +
                                                      " must be played on side " +
                                                      (constraintNow() == SideConstraint::PlayInA ? "A" : "B"));
    const Boards& xs = side[index(x)];
    if (move.size() != xs.size()) throw UsageError("Spoiler must select on every alive board of the chosen side");
    for (const auto& [bid, b] : xs) {
      auto it = move.find(bid);
      if (it == move.end()) throw UsageError("no selection for board " + bid);
      const Selection s = it->second;
      if (!b.validSelection(s)) throw UsageError("invalid selection " + s.token() + " on board " + bid);
      if (log.variant.noPlayOnTop && !s.isAtom() && b.isSelected(s.index()))
        throw UsageError("selection " + s.token() + " on board " + bid + " plays on top");
    }
    for (const auto& [bid, s] : move) log.lines.push_back({round + 1, x, bid, s});
    pending = {x, move};
  }

  // Applies Duplicator's copies, prunes dead boards on both sides and logs the
  // surviving copies. Boards with no copies simply drop out.
  void duplicatorReply(const Replies& replies) {
    if (!pending) throw HttpError(409, "no Spoiler move to answer");
    const Side x = pending->first;
    const Side y = other(x);
    Boards nx, ny;
    for (const auto& [bid, b] : side[index(x)]) nx.emplace_back(bid, extend(b, pending->second.at(bid)));
    std::set<std::string> ids;
    for (const auto& [parent, sels] : replies) {
      auto it = std::find_if(side[index(y)].begin(), side[index(y)].end(),
                             [&](const auto& p) { return p.first == parent; });
      if (it == side[index(y)].end()) throw UsageError("no alive board " + parent + " on side " + sideChar(y));
      for (Selection s : sels) {
        if (!it->second.validSelection(s)) throw UsageError("invalid selection " + s.token() + " on board " + parent);
        std::string cid = parent + "." + s.token();
        if (ids.insert(cid).second) ny.emplace_back(std::move(cid), extend(it->second, s));
      }
    }
    std::erase_if(ny, [&](const auto& p) { return !aliveIn(p.second, y, nx); });
    std::erase_if(nx, [&](const auto& p) { return !aliveIn(p.second, x, ny); });
    for (const auto& [cid, b] : ny) log.lines.push_back({round + 1, y, cid, b.at(b.length() - 1)});
    side[index(x)] = std::move(nx);
    side[index(y)] = std::move(ny);
    pending.reset();
    ++round;
  }

  void prune() {
    std::erase_if(side[0], [&](const auto& p) { return !aliveIn(p.second, Side::A, side[1]); });
    std::erase_if(side[1], [&](const auto& p) { return !aliveIn(p.second, Side::B, side[0]); });
  }

  void settle() {
    log.result.clear();
    if (pending) return;
    if (side[0].empty() || side[1].empty()) log.result = "spoiler";
    else if (round >= rounds || spoilerStuck()) log.result = "duplicator";
  }

  // Every copy Duplicator could make of the boards on the side Spoiler did not
  // move, deduplicated across the side and restricted to alive copies.
  Replies obliviousReplies() const {
    const Side x = pending->first, y = other(x);
    Boards nx;
    for (const auto& [bid, b] : side[index(x)]) nx.emplace_back(bid, extend(b, pending->second.at(bid)));
    Replies out;
    std::set<CanonicalKey> seen;
    for (const auto& [bid, b] : side[index(y)]) {
      for (int c = 0; c < b.candidateCount(); ++c) {
        const Selection s = b.candidate(c);
        const Board nb = extend(b, s);
        if (!aliveIn(nb, y, nx)) continue;
        if (!seen.insert(canonical_key(nb)).second) continue;
        out[bid].push_back(s);
      }
    }
    return out;
  }

  // State after `replies`, for the solver; nullopt when Spoiler has already won.
  std::optional<GameState> afterReplies(const Replies& replies) const {
    Session probe;
    probe.rounds = rounds;
    probe.constraints = constraints;
    probe.log.variant = log.variant;
    probe.round = round;
    probe.side[0] = side[0];
    probe.side[1] = side[1];
    probe.pending = pending;
    probe.duplicatorReply(replies);
    if (probe.side[0].empty() || probe.side[1].empty()) return std::nullopt;
    return probe.solverState();
  }

  static std::size_t copies(const Replies& r) {
    std::size_t n = 0;
    for (const auto& [k, v] : r) n += v.size();
    return n;
  }

  // Drops copies, last first, while the reply keeps Duplicator winning, until
  // at most `limit` remain. Returns false if the starting reply loses. Only
  // that first check can run out of budget; later overruns stop the shrinking.
  bool shrinkPreservingWin(Replies& replies, std::size_t limit) const {
    auto wins = [&](const Replies& r) {
      auto st = afterReplies(r);
      if (!st) return false;
      return ms_winner(*st, {budget, false, {}}).winner == Player::Duplicator;
    };
    if (!wins(replies)) return false;
    std::vector<std::pair<std::string, Selection>> order;
    for (const auto& [k, v] : replies)
      for (Selection s : v) order.emplace_back(k, s);
    for (auto it = order.rbegin(); it != order.rend() && copies(replies) > limit; ++it) {
      Replies trial = replies;
      auto& v = trial[it->first];
      v.erase(std::find(v.begin(), v.end(), it->second));
      if (v.empty()) trial.erase(it->first);
      try {
        if (wins(trial)) replies = std::move(trial);
      } catch (const BudgetExceeded&) {
        break;
      }
    }
    return true;
  }

  static void truncate(Replies& replies, std::size_t limit) {
    std::size_t kept = 0;
    for (auto it = replies.begin(); it != replies.end();) {
      auto& v = it->second;
      const std::size_t take = std::min(v.size(), limit - std::min(limit, kept));
      v.resize(take);
      kept += take;
      it = v.empty() ? replies.erase(it) : std::next(it);
    }
  }

  // Engine Duplicator: oblivious copies, deduplicated and pruned, then cut to
  // the cap only where the cut keeps a winning verdict.
  Replies engineReplies(json& info) const {
    Replies r = obliviousReplies();
    info = {{"player", "duplicator"}, {"optimal", true}, {"heuristic", false}, {"losing", false}};
    if (copies(r) <= cap) return r;
    try {
      if (!shrinkPreservingWin(r, cap)) {
        info["losing"] = true;
        truncate(r, cap);
      }
    } catch (const BudgetExceeded&) {
      info["optimal"] = false;
      info["heuristic"] = true;
      truncate(r, cap);
    }
    return r;
  }

  // Middle legal selection on every board of the first available side.
  std::pair<Side, std::map<std::string, Selection>> fallbackMove() const {
    for (Side s : {Side::A, Side::B}) {
      if (!allows(constraintNow(), s)) continue;
      auto legal = legalOn(s);
      if (!legal) continue;
      std::map<std::string, Selection> move;
      for (std::size_t i = 0; i < side[index(s)].size(); ++i) {
        const auto& opts = (*legal)[i];
        move[side[index(s)][i].first] = opts[opts.size() / 2];
      }
      return {s, move};
    }
    throw UsageError("Spoiler has no legal move");
  }

  // Solver move for Spoiler; `winning` reports whether Spoiler wins from here.
  std::pair<Side, std::map<std::string, Selection>> solverMove(bool& winning) const {
    MsVerdict v = ms_winner(solverState(), {budget, true, {}});
    winning = v.winner == Player::Spoiler;
    if (!winning || !v.certificate || v.certificate->rounds.empty()) return fallbackMove();
    const RoundPlan& plan = v.certificate->rounds.front();
    const Boards& xs = side[index(plan.side)];
    std::vector<Board> boards;
    for (const auto& [bid, b] : xs) boards.push_back(b);
    const std::vector<Selection> sels = plan_selections(plan, boards);
    std::map<std::string, Selection> move;
    for (std::size_t i = 0; i < xs.size(); ++i) move[xs[i].first] = sels[i];
    return {plan.side, move};
  }

  void engineSpoiler() {
    bool winning = false;
    json info = {{"player", "spoiler"}, {"optimal", true}, {"heuristic", false}};
    std::pair<Side, std::map<std::string, Selection>> move;
    try {
      move = solverMove(winning);
      info["losing"] = !winning;
    } catch (const BudgetExceeded&) {
      move = fallbackMove();
      info["optimal"] = false;
      info["heuristic"] = true;
      info["losing"] = false;
    }
    spoilerMove(move.first, move.second);
    lastEngine = info;
  }

  // After a human action: let the engine move while it is its turn.
  void engineTurn() {
    settle();
    if (finished()) return;
    if (human == Player::Spoiler && pending) {
      json info;
      Replies r = engineReplies(info);
      duplicatorReply(r);
      lastEngine = info;
      settle();
    } else if (human == Player::Duplicator && !pending) {
      engineSpoiler();
    }
  }

  // Log length to cut back to for undo, or nullopt when nothing can be undone.
  std::optional<std::size_t> undoPoint() const {
    if (log.lines.empty()) return std::nullopt;
    const int last = log.lines.back().round;
    if (human == Player::Spoiler) {
      std::size_t n = 0;
      while (n < log.lines.size() && log.lines[n].round < last) ++n;
      return n;
    }
    const int k = pending ? last - 1 : last;
    if (k < 1) return std::nullopt;
    std::size_t n = 0;
    while (n < log.lines.size() && log.lines[n].round < k) ++n;
    const Side x = log.lines[n].side;
    while (n < log.lines.size() && log.lines[n].round == k && log.lines[n].side == x) ++n;
    return n;
  }

  json moveJson(Side s, const std::map<std::string, Selection>& move) const {
    json sel = json::object();
    for (const auto& [bid, x] : move) sel[bid] = x.token();
    return {{"side", std::string(1, sideChar(s))}, {"selections", sel}};
  }

  static json repliesJson(const Replies& r) {
    json out = json::object();
    for (const auto& [bid, v] : r) {
      json toks = json::array();
      for (Selection s : v) toks.push_back(s.token());
      out[bid] = toks;
    }
    return out;
  }

  json state() const {
    json boards = json::object();
    for (Side s : {Side::A, Side::B}) {
      json list = json::array();
      for (const auto& [bid, b] : side[index(s)]) {
        json hist = json::array();
        for (int i = 0; i < b.length(); ++i) hist.push_back(b.at(i).token());
        list.push_back({{"id", bid},
                        {"spec", b.base().describe()},
                        {"size", b.base().size()},
                        {"history", hist},
                        {"atomLedger", b.atomLedger()}});
      }
      boards[std::string(1, sideChar(s))] = list;
    }
    json pairs = json::array();
    for (const auto& [ia, a] : side[0])
      for (const auto& [ib, b] : side[1])
        if (partial_iso(a, b)) pairs.push_back({ia, ib});
    std::string phase = finished() ? "finished" : pending ? "duplicator" : "spoiler";
    return {{"id", id},
            {"humanRole", roleName(human)},
            {"rounds", rounds},
            {"round", round},
            {"roundsLeft", rounds - round},
            {"prefix", prefix_string(constraints)},
            {"variant", {{"atoms", log.variant.atoms}, {"noPlayOnTop", log.variant.noPlayOnTop}}},
            {"phase", phase},
            {"turn", finished() ? json(nullptr) : json(roleName(toMove()))},
            {"winner", finished() ? json(log.result) : json(nullptr)},
            {"boards", boards},
            {"alivePairs", pairs},
            {"pending", pending ? moveJson(pending->first, pending->second) : json(nullptr)},
            {"engine", lastEngine.is_null() ? json(nullptr) : lastEngine},
            {"cap", cap},
            {"log", trace_to_text(log)}};
  }

  std::string fileText() const {
    std::ostringstream out;
    const std::string prefix = prefix_string(constraints);
    out << "# session\t" << id << "\t" << roleName(human) << "\t" << rounds << "\t" << (prefix.empty() ? "-" : prefix)
        << "\t" << cap << "\n"
        << trace_to_text(log);
    return out.str();
  }
};

Service::Service(ServiceOptions options) : options_(std::move(options)) {
  if (!options_.persistDir.empty()) restore();
}

Service::~Service() { stop(); }

std::shared_ptr<Session> Service::find(const std::string& id) {
  std::lock_guard lock(mapMutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw HttpError(404, "unknown session " + id);
  return it->second;
}

void Service::persist(const Session& s) const {
  if (options_.persistDir.empty()) return;
  std::filesystem::create_directories(options_.persistDir);
  const auto path = std::filesystem::path(options_.persistDir) / (s.id + ".trace");
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp);
    f << s.fileText();
  }
  std::filesystem::rename(tmp, path);
}

void Service::restore() {
  if (!std::filesystem::is_directory(options_.persistDir)) return;
  for (const auto& entry : std::filesystem::directory_iterator(options_.persistDir)) {
    if (entry.path().extension() != ".trace") continue;
    std::ifstream f(entry.path());
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();
    std::istringstream first(text);
    std::string header;
    std::getline(first, header);
    std::vector<std::string> fields;
    std::stringstream hs(header);
    for (std::string field; std::getline(hs, field, '\t');) fields.push_back(field);
    if (fields.size() != 6 || fields[0] != "# session") continue;
    auto s = std::make_shared<Session>();
    s->id = fields[1];
    s->human = parseRole(fields[2]);
    s->rounds = std::stoi(fields[3]);
    s->constraints = parse_prefix(fields[4] == "-" ? "" : fields[4]);
    s->cap = std::stoul(fields[5]);
    s->budget = options_.budget;
    s->log = trace_from_text(text);
    s->rebuild();
    sessions_[s->id] = s;
  }
}

ServiceResponse Service::handle(const std::string& method, const std::string& path, const std::string& body) {
  auto reply = [](int status, const json& j) { return ServiceResponse{status, j.dump()}; };
  try {
    std::vector<std::string> parts;
    std::stringstream ps(path);
    for (std::string p; std::getline(ps, p, '/');)
      if (!p.empty()) parts.push_back(p);
    if (parts.empty() || parts[0] != "sessions" || parts.size() > 3) throw HttpError(404, "no route " + path);
    auto parseBody = [&] {
      if (body.empty()) return json::object();
      try {
        json j = json::parse(body);
        if (!j.is_object()) throw UsageError("request body must be a JSON object");
        return j;
      } catch (const json::exception& e) {
        throw UsageError(std::string("bad JSON: ") + e.what());
      }
    };

    if (parts.size() == 1) {
      if (method != "POST") throw HttpError(405, "use POST /sessions");
      const json req = parseBody();
      auto s = std::make_shared<Session>();
      s->human = parseRole(req.value("humanRole", std::string("spoiler")));
      s->rounds = req.value("rounds", 0);
      if (s->rounds < 1) throw UsageError("rounds must be at least 1");
      s->log.variant = {req.value("atoms", false), req.value("noPlayOnTop", false)};
      s->constraints = parse_prefix(req.value("prefix", std::string()));
      if (req.contains("constrainFirst")) {
        const Side first = parseSideName(req.at("constrainFirst").get<std::string>());
        if (s->constraints.empty()) s->constraints.push_back(SideConstraint::Free);
        s->constraints[0] = first == Side::A ? SideConstraint::PlayInA : SideConstraint::PlayInB;
      }
      if (!req.contains("a") || !req.contains("b")) throw UsageError("'a' and 'b' structures are required");
      const auto as = structuresFrom(req.at("a"), "a"), bs = structuresFrom(req.at("b"), "b");
      // Validates vocabularies, round count and constraints.
      GameState::make(as, bs, s->rounds, s->log.variant, s->constraints);
      s->cap = req.value("cap", options_.boardCap);
      if (s->cap < 1) throw UsageError("cap must be positive");
      s->budget = options_.budget;
      for (std::size_t i = 0; i < as.size(); ++i)
        s->log.initial.push_back({Side::A, "A" + std::to_string(i + 1), as[i]->describe(), {}});
      for (std::size_t i = 0; i < bs.size(); ++i)
        s->log.initial.push_back({Side::B, "B" + std::to_string(i + 1), bs[i]->describe(), {}});
      s->rebuild();
      s->engineTurn();
      {
        std::lock_guard lock(mapMutex_);
        do s->id = newToken();
        while (sessions_.count(s->id));
        sessions_[s->id] = s;
      }
      persist(*s);
      return reply(201, s->state());
    }

    auto s = find(parts[1]);
    std::lock_guard lock(s->mu);
    if (parts.size() == 2) {
      if (method != "GET") throw HttpError(405, "use GET /sessions/{id}");
      return reply(200, s->state());
    }
    if (method != "POST") throw HttpError(405, "use POST");
    const std::string action = parts[2];
    const json req = parseBody();

    if (action == "move") {
      if (s->finished()) throw HttpError(409, "session is finished");
      if (s->toMove() != s->human) throw HttpError(409, "not the human's turn");
      const std::vector<TraceLine> saved = s->log.lines;
      const std::string savedResult = s->log.result;
      try {
        if (s->human == Player::Spoiler) {
          if (!req.contains("side") || !req.contains("selections")) throw UsageError("move needs 'side' and 'selections'");
          std::map<std::string, Selection> move;
          for (const auto& [bid, tok] : req.at("selections").items())
            move[bid] = Selection::parseToken(tok.get<std::string>());
          s->spoilerMove(parseSideName(req.at("side").get<std::string>()), move);
        } else {
          Replies replies;
          if (req.value("fill", std::string()) == "oblivious") {
            replies = s->obliviousReplies();
          } else {
            if (!req.contains("replies")) throw UsageError("move needs 'replies' or \"fill\": \"oblivious\"");
            for (const auto& [bid, toks] : req.at("replies").items())
              for (const json& t : toks) replies[bid].push_back(Selection::parseToken(t.get<std::string>()));
            if (Session::copies(replies) > s->cap)
              throw UsageError("more than " + std::to_string(s->cap) + " copies; use \"fill\": \"oblivious\"");
          }
          s->duplicatorReply(replies);
        }
        s->lastEngine = nullptr;
        s->engineTurn();
      } catch (...) {
        s->log.lines = saved;
        s->log.result = savedResult;
        s->rebuild();
        throw;
      }
      persist(*s);
      return reply(200, s->state());
    }

    if (action == "hint") {
      if (s->finished()) throw HttpError(409, "session is finished");
      if (s->toMove() != s->human) throw HttpError(409, "not the human's turn");
      try {
        if (s->human == Player::Spoiler) {
          bool winning = false;
          auto move = s->solverMove(winning);
          json out = s->moveJson(move.first, move.second);
          out["losing"] = !winning;
          return reply(200, out);
        }
        Replies r = s->obliviousReplies();
        const bool winning = s->shrinkPreservingWin(r, 1);
        return reply(200, {{"replies", Session::repliesJson(r)}, {"losing", !winning}});
      } catch (const BudgetExceeded& e) {
        throw HttpError(422, std::string("hint search exceeded the budget: ") + e.what());
      }
    }

    if (action == "undo") {
      const auto point = s->undoPoint();
      if (!point) throw HttpError(409, "nothing to undo");
      s->log.lines.resize(*point);
      s->log.result.clear();
      s->rebuild();
      s->lastEngine = nullptr;
      persist(*s);
      return reply(200, s->state());
    }
    throw HttpError(404, "no route " + path);
  } catch (const HttpError& e) {
    return reply(e.status, {{"error", e.what()}});
  } catch (const BudgetExceeded& e) {
    return reply(503, {{"error", e.what()}});
  } catch (const std::logic_error& e) {  // UsageError, DomainError, json type errors
    return reply(400, {{"error", e.what()}});
  }
}

void Service::serve(const std::string& host, int port, const std::function<void(int)>& onListen) {
  auto server = std::make_unique<httplib::Server>();
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ServiceResponse r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body, "application/json");
  };
  server->Get(".*", forward);
  server->Post(".*", forward);
  server->Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  const int bound = port == 0 ? server->bind_to_any_port(host) : (server->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw UsageError("cannot bind " + host + ":" + std::to_string(port));
  server_ = server.get();
  if (onListen) onListen(bound);
  server->listen_after_bind();
  server_ = nullptr;
}

void Service::stop() {
  if (server_) static_cast<httplib::Server*>(server_)->stop();
}

}  // namespace msgames
