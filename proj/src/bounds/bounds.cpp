#include "msgames/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "msgames/ef_solver.hpp"
#include "msgames/ms_solver.hpp"
#include "msgames/sentence.hpp"

namespace msgames {

namespace {

void checkR(int r) {
  if (r < 1 || r > 62) throw DomainError("r must be in 1..62");
}

// Both g and g' follow x(r) = 2 x(r-1), plus 1 when r is odd, from r = 4 on.
std::uint64_t recurse(int r, std::uint64_t at1, std::uint64_t at2, std::uint64_t at3) {
  if (r == 1) return at1;
  if (r == 2) return at2;
  if (r == 3) return at3;
  std::uint64_t x = 10;
  for (int k = 5; k <= r; ++k) x = 2 * x + (k % 2);
  return x;
}

std::string pad(int v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", v);
  return buf;
}

std::string pairKey(int r, int n, int m) { return "r" + std::to_string(r) + "/" + pad(n) + "v" + pad(m); }

const char* winnerName(Player p) { return p == Player::Spoiler ? "spoiler" : "duplicator"; }

using Clock = std::chrono::steady_clock;

std::uint64_t since(Clock::time_point t) {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t).count());
}

// Runs one instance; a budget overrun becomes a SKIPPED record.
CampaignRecord instance(const std::string& campaign, const std::string& key, const std::string& expected,
                        const std::function<std::string(std::uint64_t& nodes)>& observe) {
  CampaignRecord rec{campaign, key, expected, "", Status::Skipped, 0, 0};
  const auto t = Clock::now();
  try {
    rec.observed = observe(rec.nodes);
    rec.status = rec.observed == expected ? Status::Pass : Status::Fail;
  } catch (const BudgetExceeded&) {
    rec.observed = "budget exceeded";
  }
  rec.millis = since(t);
  return rec;
}

// Replay and synthesis check for a Spoiler win.
CampaignRecord synthRecord(const std::string& campaign, const std::string& key, const GameState& s,
                           const SpoilerCertificate& cert) {
  return instance(campaign, "synth:" + key, "sound", [&](std::uint64_t&) -> std::string {
    if (!replay_certificate(s, cert)) return "replay failed";
    Sentence phi;
    try {
      phi = synthesize(cert, s);
    } catch (const std::logic_error& e) {
      return std::string("synthesis failed: ") + e.what();
    }
    if (quantifier_profile(phi).count > s.roundsLeft) return "too many quantifiers";
    const int fresh = s.variant.atoms ? s.roundsLeft : 0;
    for (const Board& a : s.sideA)
      if (!eval(phi, board_model(a, fresh))) return "false on side A";
    for (const Board& b : s.sideB)
      if (eval(phi, board_model(b, fresh))) return "true on side B";
    return "sound";
  });
}

void msPairs(std::vector<CampaignRecord>& out, const std::string& campaign, int maxR, int maxSize, bool atoms,
             bool synth, const Budget& budget, const std::function<std::string(int r, int m)>& expect) {
  for (int r = 1; r <= maxR; ++r)
    for (int n = 2; n <= maxSize; ++n)
      for (int m = 1; m < n; ++m) {
        GameState s = GameState::make({make_linear_order(n)}, {make_linear_order(m)}, r, {atoms, false});
        std::optional<SpoilerCertificate> cert;
        const std::string key = pairKey(r, n, m);
        out.push_back(instance(campaign, key, expect(r, m), [&](std::uint64_t& nodes) {
          MsVerdict v = ms_winner(s, {budget, synth, {}});
          nodes = v.nodes;
          cert = v.certificate;
          return std::string(winnerName(v.winner));
        }));
        if (synth && cert) out.push_back(synthRecord(campaign, key, s, *cert));
      }
}

std::vector<CampaignRecord> fTable(const CampaignCaps& caps) {
  std::vector<CampaignRecord> out;
  const int maxR = caps.maxR ? caps.maxR : 4, maxSize = caps.maxSize ? caps.maxSize : 20;
  for (int r = 1; r <= maxR; ++r)
    for (int n = 2; n <= maxSize; ++n)
      for (int m = 1; m < n; ++m) {
        const bool dup = static_cast<std::uint64_t>(m) >= f_closed(r);
        out.push_back(instance("f-table", pairKey(r, n, m), dup ? "duplicator" : "spoiler", [&](std::uint64_t& nodes) {
          EfVerdict v = ef_winner(Board(make_linear_order(n)), Board(make_linear_order(m)), r, {caps.budget, false});
          nodes = v.nodes;
          return std::string(winnerName(v.winner));
        }));
      }
  return out;
}

std::vector<CampaignRecord> sentenceBoundaries(const CampaignCaps& caps) {
  std::vector<CampaignRecord> out;
  auto check = [&](const std::string& name, int r, int size, bool expected) {
    const std::string key = name + (name == "chain" ? std::to_string(r) : "") + "@" + pad(size);
    out.push_back(instance("sentence-boundaries", key, expected ? "true" : "false", [&](std::uint64_t&) {
      return std::string(eval(library(name, r), *make_linear_order(size)) ? "true" : "false");
    }));
  };
  const int maxR = caps.maxR ? caps.maxR : 6;
  for (int r = 2; r <= std::min(maxR, 6); ++r) {
    const std::string name = "phi" + std::to_string(r);
    const int t = library_threshold(name);
    check(name, 0, t, true);
    check(name, 0, t - 1, false);
  }
  for (int k = 5; k <= 9; ++k) {
    const std::string name = "phi4_" + std::to_string(k);
    check(name, 0, k, true);
    check(name, 0, k - 1, false);
  }
  for (int r = 2; r <= maxR; ++r) {
    check("chain", r, r, true);
    check("chain", r, r - 1, false);
  }
  return out;
}

std::vector<CampaignRecord> prefixDiscrepancy(const CampaignCaps& caps) {
  std::vector<CampaignRecord> out;
  const auto eae = parse_prefix("EAE");
  out.push_back(instance("prefix-discrepancy", "ef/EAE/05v04", "spoiler", [&](std::uint64_t& nodes) {
    EfVerdict v = ef_prefix_winner(Board(make_linear_order(5)), Board(make_linear_order(4)), eae, {caps.budget, false});
    nodes = v.nodes;
    return std::string(winnerName(v.winner));
  }));
  out.push_back(instance("prefix-discrepancy", "ms/EAE/05v04", "duplicator", [&](std::uint64_t& nodes) {
    GameState s = GameState::make({make_linear_order(5)}, {make_linear_order(4)}, 3, {}, eae);
    MsVerdict v = ms_winner(s, {caps.budget, false, {}});
    nodes = v.nodes;
    return std::string(winnerName(v.winner));
  }));
  return out;
}

}  // namespace

std::uint64_t f_closed(int r) {
  checkR(r);
  return (std::uint64_t{1} << r) - 1;
}

std::uint64_t g_closed(int r) {
  checkR(r);
  return recurse(r, 1, 2, 4);
}

std::uint64_t g_prime_closed(int r) {
  checkR(r);
  return recurse(r, 1, 2, 5);
}

std::uint64_t g_forall_closed(int r) {
  checkR(r);
  return r == 1 ? 1 : 2 * g_prime_closed(r - 1);
}

std::vector<BoundsRow> bounds_table(int maxR) {
  if (maxR < 1 || maxR > 62) throw DomainError("table needs 1 <= max r <= 62");
  std::vector<BoundsRow> rows;
  for (int r = 1; r <= maxR; ++r) rows.push_back({r, f_closed(r), g_closed(r), g_prime_closed(r), g_forall_closed(r)});
  return rows;
}

std::string bounds_table_text(const std::vector<BoundsRow>& rows) {
  std::ostringstream out;
  out << "r\tf\tg\tg'\tg'_forall\n";
  for (const BoundsRow& row : rows)
    out << row.r << "\t" << row.f << "\t" << row.g << "\t" << row.gPrime << "\t" << row.gForall << "\n";
  return out.str();
}

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skipped: return "SKIPPED";
  }
  return "";
}

std::vector<std::string> campaign_names() {
  return {"f-table", "g-small", "g-gap", "atoms-table", "sentence-boundaries", "prefix-discrepancy"};
}

std::vector<CampaignRecord> verify_campaign(const std::string& name, const CampaignCaps& caps) {
  std::vector<CampaignRecord> out;
  if (name == "f-table") {
    out = fTable(caps);
  } else if (name == "g-small") {
    msPairs(out, name, caps.maxR ? caps.maxR : 3, caps.maxSize ? caps.maxSize : 7, false, true, caps.budget,
            [](int r, int m) { return static_cast<std::uint64_t>(m) >= g_closed(r) ? "duplicator" : "spoiler"; });
  } else if (name == "g-gap") {
    msPairs(out, name, caps.maxR ? caps.maxR : 3, caps.maxSize ? caps.maxSize : 7, false, false, caps.budget,
            [](int r, int m) { return static_cast<std::uint64_t>(m) < g_closed(r) ? "spoiler" : "duplicator"; });
  } else if (name == "atoms-table") {
    msPairs(out, name, caps.maxR ? caps.maxR : 3, caps.maxSize ? caps.maxSize : 6, true, true, caps.budget,
            [](int r, int m) { return static_cast<std::uint64_t>(m) >= g_prime_closed(r) ? "duplicator" : "spoiler"; });
    // First move forced onto the smaller side.
    const int maxR = caps.maxR ? caps.maxR : 3;
    for (int r = 2; r <= maxR; ++r) {
      const int m = static_cast<int>(g_forall_closed(r));
      std::vector<SideConstraint> first{SideConstraint::PlayInB};
      GameState s = GameState::make({make_linear_order(m + 1)}, {make_linear_order(m)}, r, {true, false}, first);
      out.push_back(instance(name, "forall:" + pairKey(r, m + 1, m), "duplicator", [&](std::uint64_t& nodes) {
        MsVerdict v = ms_winner(s, {caps.budget, false, {}});
        nodes = v.nodes;
        return std::string(winnerName(v.winner));
      }));
    }
  } else if (name == "sentence-boundaries") {
    out = sentenceBoundaries(caps);
  } else if (name == "prefix-discrepancy") {
    out = prefixDiscrepancy(caps);
  } else {
    throw UsageError("unknown campaign '" + name + "'");
  }
  std::stable_sort(out.begin(), out.end(), [](const CampaignRecord& a, const CampaignRecord& b) { return a.key < b.key; });
  return out;
}

std::string report_line(const CampaignRecord& r) {
  std::ostringstream out;
  out << r.campaign << "\t" << r.key << "\t" << r.expected << "\t" << r.observed << "\t" << status_name(r.status) << "\t"
      << r.nodes << "\t" << r.millis;
  return out.str();
}

void append_report(const std::string& path, const std::vector<CampaignRecord>& records) {
  std::ofstream f(path, std::ios::app);
  if (!f) throw UsageError("cannot open report file " + path);
  for (const CampaignRecord& r : records) f << report_line(r) << "\n";
}

}  // namespace msgames
