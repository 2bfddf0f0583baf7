#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msgames/game_state.hpp"

namespace msgames {

// Threshold sizes for r-round games on linear orders: E-F (f), MS (g), MS
// with atoms (g'), and the upper bound 2 g'(r-1) for MS with atoms when the
// first move is forced onto the smaller side. All need 1 <= r <= 62.
std::uint64_t f_closed(int r);
std::uint64_t g_closed(int r);
std::uint64_t g_prime_closed(int r);
std::uint64_t g_forall_closed(int r);

struct BoundsRow {
  int r = 0;
  std::uint64_t f = 0, g = 0, gPrime = 0, gForall = 0;
};
std::vector<BoundsRow> bounds_table(int maxR);
std::string bounds_table_text(const std::vector<BoundsRow>& rows);

enum class Status { Pass, Fail, Skipped };
const char* status_name(Status s);

struct CampaignRecord {
  std::string campaign;
  std::string key;
  std::string expected;
  std::string observed;
  Status status = Status::Skipped;
  std::uint64_t nodes = 0;
  std::uint64_t millis = 0;
};

struct CampaignCaps {
  int maxR = 0;     // 0 = the campaign's default
  int maxSize = 0;  // 0 = the campaign's default
  Budget budget = Budget::fromEnvironment();  // per instance
};

// Campaigns: f-table, g-small, g-gap, atoms-table, sentence-boundaries,
// prefix-discrepancy. Records are sorted by key. Instances that exceed the
// budget are SKIPPED. g-small and atoms-table also emit one "synth" record
// per Spoiler win: certificate replay plus a synthesized sentence that
// separates the two sides with at most r quantifiers.
std::vector<CampaignRecord> verify_campaign(const std::string& name, const CampaignCaps& caps = {});
std::vector<std::string> campaign_names();

// Tab-separated: campaign, key, expected, observed, status, nodes, millis.
std::string report_line(const CampaignRecord& r);
void append_report(const std::string& path, const std::vector<CampaignRecord>& records);

}  // namespace msgames
