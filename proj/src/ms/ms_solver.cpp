#include "msgames/ms_solver.hpp"

#include <algorithm>

#include <json.hpp>

#include "msgames/ms_engine.hpp"
#include "msgames/structure_spec.hpp"

namespace msgames {

using nlohmann::json;

MsVerdict ms_winner(const GameState& state, const MsOptions& options) {
  Engine engine(state.variant, state.constraints, options.budget, options.filter);
  Position p = engine.makePosition(state.sideA, state.sideB);
  MsVerdict v;
  bool spoiler;
  if (state.roundsLeft == 0) {
    spoiler = p.finished();
    if (!spoiler) v.witnessPair = std::make_pair(p.side[0][0], p.side[1][p.adj[0][0][0]]);
  } else {
    spoiler = p.finished() || engine.win(p, state.roundsLeft, 0);
  }
  v.winner = spoiler ? Player::Spoiler : Player::Duplicator;
  if (spoiler && options.certificate) {
    SpoilerCertificate cert;
    engine.certify(p, state.roundsLeft, 0, cert);
    v.certificate = std::move(cert);
  }
  v.nodes = engine.nodes();
  v.millis = engine.meter().elapsedMillis();
  return v;
}

namespace {

bool pairAlive(const Board& a, const Board& b, const PairFilter& filter) {
  return partial_iso(a, b) && (!filter || filter(a, b));
}

// Keeps only boards with an alive partner; returns whether any pair is alive.
bool pruneDead(std::vector<Board>& a, std::vector<Board>& b, const PairFilter& filter) {
  std::vector<char> keepA(a.size(), 0), keepB(b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (pairAlive(a[i], b[j], filter)) keepA[i] = keepB[j] = 1;
  auto filterOut = [](std::vector<Board>& v, const std::vector<char>& keep) {
    std::vector<Board> out;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (keep[i]) out.push_back(v[i]);
    v = std::move(out);
  };
  filterOut(a, keepA);
  filterOut(b, keepB);
  return !a.empty();
}

}  // namespace

std::vector<Selection> plan_selections(const RoundPlan& plan, const std::vector<Board>& boards) {
  std::vector<Selection> out;
  for (const Board& b : boards) {
    CanonicalForm form = canonical_form(b);
    auto it = plan.moves.find(form.key);
    if (it == plan.moves.end()) throw UsageError("certificate has no move for board " + describe(b));
    out.push_back(from_canonical(form, it->second));
  }
  return out;
}

bool replay_certificate(const GameState& state, const SpoilerCertificate& cert, const PairFilter& filter) {
  std::vector<Board> a = state.sideA, b = state.sideB;
  for (int round = 0; round < state.roundsLeft; ++round) {
    if (!pruneDead(a, b, filter)) return true;
    if (round >= static_cast<int>(cert.rounds.size())) return false;
    const RoundPlan& plan = cert.rounds[round];
    if (!allows(state.constraintAt(round), plan.side))
      throw UsageError("certificate plays on a side the constraints forbid");
    std::vector<Board>& mover = plan.side == Side::A ? a : b;
    std::vector<Board>& rest = plan.side == Side::A ? b : a;
    std::vector<Board> moved;
    for (const Board& x : mover) {
      CanonicalForm form = canonical_form(x);
      auto it = plan.moves.find(form.key);
      if (it == plan.moves.end()) return false;
      Selection s = from_canonical(form, it->second);
      if (!x.validSelection(s)) throw UsageError("certificate selection out of range");
      if (state.variant.noPlayOnTop && !s.isAtom() && x.isSelected(s.index()))
        throw UsageError("certificate plays on top in a no-play-on-top game");
      moved.push_back(extend(x, s));
    }
    mover = std::move(moved);
    rest = duplicator_expand(rest, state.variant);
  }
  return !pruneDead(a, b, filter);
}

namespace {

std::string toHex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

std::string fromHex(const std::string& hex) {
  if (hex.size() % 2) throw UsageError("bad hex key");
  auto val = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw UsageError("bad hex key");
  };
  std::string out;
  for (std::size_t i = 0; i < hex.size(); i += 2)
    out.push_back(static_cast<char>(val(hex[i]) * 16 + val(hex[i + 1])));
  return out;
}

json boardsToJson(const std::vector<Board>& boards) {
  json arr = json::array();
  for (const Board& b : boards) {
    json h = json::array();
    for (int i = 0; i < b.length(); ++i) h.push_back(b.at(i).token());
    arr.push_back({{"structure", b.base().describe()}, {"history", h}});
  }
  return arr;
}

std::vector<Board> boardsFromJson(const json& arr, bool atoms) {
  std::vector<Board> out;
  for (const auto& e : arr) {
    Board b(parse_structure(e.at("structure").get<std::string>()), atoms);
    for (const auto& t : e.value("history", json::array())) b = extend(b, Selection::parseToken(t.get<std::string>()));
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

std::string certificate_to_json(const GameState& state, const SpoilerCertificate& cert) {
  json doc;
  doc["state"] = {{"sideA", boardsToJson(state.sideA)},
                  {"sideB", boardsToJson(state.sideB)},
                  {"roundsLeft", state.roundsLeft},
                  {"constraints", prefix_string(state.constraints)},
                  {"atoms", state.variant.atoms},
                  {"noPlayOnTop", state.variant.noPlayOnTop}};
  json rounds = json::array();
  for (const RoundPlan& plan : cert.rounds) {
    json moves = json::array();
    for (const auto& [key, sel] : plan.moves) moves.push_back({{"key", toHex(key)}, {"selection", sel.token()}});
    rounds.push_back({{"side", std::string(1, sideChar(plan.side))}, {"moves", moves}});
  }
  doc["rounds"] = rounds;
  return doc.dump(1);
}

std::pair<GameState, SpoilerCertificate> certificate_from_json(const std::string& text) {
  try {
    json doc = json::parse(text);
    const json& st = doc.at("state");
    GameState s;
    s.variant.atoms = st.value("atoms", false);
    s.variant.noPlayOnTop = st.value("noPlayOnTop", false);
    s.sideA = boardsFromJson(st.at("sideA"), s.variant.atoms);
    s.sideB = boardsFromJson(st.at("sideB"), s.variant.atoms);
    s.roundsLeft = st.at("roundsLeft").get<int>();
    s.constraints = parse_prefix(st.value("constraints", std::string()));
    s.normalize();
    SpoilerCertificate cert;
    for (const auto& r : doc.at("rounds")) {
      RoundPlan plan;
      std::string side = r.at("side").get<std::string>();
      if (side != "A" && side != "B") throw UsageError("certificate side must be A or B");
      plan.side = side == "A" ? Side::A : Side::B;
      for (const auto& m : r.at("moves"))
        plan.moves[fromHex(m.at("key").get<std::string>())] =
            Selection::parseToken(m.at("selection").get<std::string>());
      cert.rounds.push_back(std::move(plan));
    }
    return {std::move(s), std::move(cert)};
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace msgames
