#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "msgames/bounds.hpp"

using namespace msgames;

TEST_SUITE("bounds") {
  TEST_CASE("closed forms") {
    const std::uint64_t g[] = {1, 2, 4, 10, 21, 42, 85, 170, 341, 682};
    const std::uint64_t gp[] = {1, 2, 5, 10, 21, 42};
    for (int r = 1; r <= 10; ++r) {
      CHECK(f_closed(r) == (std::uint64_t{1} << r) - 1);
      CHECK(g_closed(r) == g[r - 1]);
    }
    for (int r = 1; r <= 6; ++r) CHECK(g_prime_closed(r) == gp[r - 1]);
    CHECK(g_forall_closed(1) == 1);
    CHECK(g_forall_closed(3) == 2 * g_prime_closed(2));
    for (int r = 1; r <= 30; ++r) {
      CHECK(g_closed(r) <= g_prime_closed(r));
      CHECK(g_prime_closed(r) <= f_closed(r));
    }
    CHECK(f_closed(62) == (std::uint64_t{1} << 62) - 1);
    for (int bad : {0, -1, 63}) {
      CHECK_THROWS_AS(f_closed(bad), DomainError);
      CHECK_THROWS_AS(g_closed(bad), DomainError);
      CHECK_THROWS_AS(g_prime_closed(bad), DomainError);
      CHECK_THROWS_AS(g_forall_closed(bad), DomainError);
    }
  }

  TEST_CASE("table text") {
    const std::string text = bounds_table_text(bounds_table(6));
    CHECK(text.rfind("r\tf\tg\tg'\tg'_forall\n", 0) == 0);
    CHECK(text.find("\n6\t63\t42\t42\t") != std::string::npos);
    CHECK_THROWS_AS(bounds_table(0), DomainError);
  }

  TEST_CASE("small campaigns pass and reports append") {
    CampaignCaps caps;
    caps.maxR = 2;
    caps.maxSize = 5;
    const auto path = (std::filesystem::temp_directory_path() / "msgames_report_test.tsv").string();
    std::filesystem::remove(path);
    for (const std::string& name : campaign_names()) {
      const auto records = verify_campaign(name, caps);
      CHECK_FALSE(records.empty());
      for (const CampaignRecord& r : records) {
        INFO(report_line(r));
        CHECK(r.status == Status::Pass);
      }
      CHECK(std::is_sorted(records.begin(), records.end(),
                           [](const CampaignRecord& a, const CampaignRecord& b) { return a.key < b.key; }));
      append_report(path, records);
    }
    std::ifstream f(path);
    std::string line;
    std::getline(f, line);
    int tabs = 0;
    for (char c : line) tabs += c == '\t';
    CHECK(tabs == 6);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(verify_campaign("nope"), UsageError);
  }

  TEST_CASE("exhausted budgets are SKIPPED, not failures") {
    CampaignCaps caps;
    caps.maxR = 4;
    caps.maxSize = 12;
    caps.budget = Budget{1, 0};
    const auto records = verify_campaign("g-gap", caps);
    bool skipped = false;
    for (const CampaignRecord& r : records) {
      CHECK(r.status != Status::Fail);
      skipped |= r.status == Status::Skipped;
    }
    CHECK(skipped);
  }
}
