#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <sstream>
#include <vector>

#include "wsn/scenario/report.hpp"

namespace {

using namespace wsn::scenario;
using wsn::app::ProxyMode;
using wsn::metrics::MetricsRecord;
using wsn::tcp::Variant;

MetricsRecord rec(Variant v, std::uint32_t n, ProxyMode m, std::uint64_t seed, double tput,
                  double delay, std::uint64_t gen = 100, std::uint64_t del = 95) {
  MetricsRecord r;
  r.variant = v;
  r.node_count = n;
  r.proxy_mode = m;
  r.scenario_id = std::string(wsn::tcp::to_string(v)) + "-n" + std::to_string(n) + "-" +
                  wsn::app::to_string(m) + "-Medium";
  r.seed = seed;
  r.throughput_kbps = tput;
  r.mean_delay_ms = delay;
  r.generated = gen;
  r.delivered = del;
  r.pdr = static_cast<double>(del) / static_cast<double>(gen);
  return r;
}

// `runs` identical seeds of one configuration.
void add(std::vector<MetricsRecord>& out, Variant v, std::uint32_t n, ProxyMode m, double tput,
         double delay, std::size_t runs = 10, std::uint64_t del = 95) {
  for (std::uint64_t s = 1; s <= runs; ++s) out.push_back(rec(v, n, m, s, tput, delay, 100, del));
}

const Check& check(const Report& r, int id) {
  for (const Check& c : r.checks) {
    if (c.id == id) return c;
  }
  throw std::runtime_error("no check " + std::to_string(id));
}

const RatioRow& ratio(const Report& r, const std::string& id) {
  for (const RatioRow& row : r.ratios) {
    if (row.scenario_id == id) return row;
  }
  throw std::runtime_error("no ratio row " + id);
}

TEST(Ratios, MatchHandArithmetic) {
  std::vector<MetricsRecord> rows;
  add(rows, Variant::Tcp, 110, ProxyMode::None, 301.17, 137.744);
  add(rows, Variant::Tcp, 110, ProxyMode::Middle, 431.46, 414.309);
  const Report r = build_report(rows);
  const RatioRow& row = ratio(r, "Tcp-n110-Middle-Medium");
  ASSERT_TRUE(row.available);
  EXPECT_EQ(row.baseline_id, "Tcp-n110-None-Medium");
  EXPECT_NEAR(row.throughput_ratio, 1.43, 0.005);
  EXPECT_NEAR(row.delay_ratio, 3.01, 0.005);
  EXPECT_NEAR(row.pdr_delta, 0.0, 1e-12);
}

TEST(Ratios, IdenticalRecordsGiveUnitRatios) {
  std::vector<MetricsRecord> rows;
  add(rows, Variant::Reno, 100, ProxyMode::None, 120, 1800);
  add(rows, Variant::Reno, 100, ProxyMode::SinkNeighbor, 120, 1800);
  const RatioRow& row = ratio(build_report(rows), "Reno-n100-SinkNeighbor-Medium");
  EXPECT_DOUBLE_EQ(row.throughput_ratio, 1.0);
  EXPECT_DOUBLE_EQ(row.delay_ratio, 1.0);
  EXPECT_DOUBLE_EQ(row.pdr_delta, 0.0);
}

TEST(Ratios, MissingBaselineIsMarkedUnavailable) {
  std::vector<MetricsRecord> rows;
  add(rows, Variant::Reno, 100, ProxyMode::Middle, 120, 1800);
  const Report r = build_report(rows);
  EXPECT_FALSE(ratio(r, "Reno-n100-Middle-Medium").available);
  std::ostringstream os;
  write_report(os, r);
  EXPECT_NE(os.str().find("unavailable"), std::string::npos);
}

// A complete grid shaped like the published trends: Vegas slower but
// quicker without proxies, proxies faster but slower.
std::vector<MetricsRecord> trend_grid() {
  std::vector<MetricsRecord> rows;
  for (std::uint32_t n : {50u, 100u, 110u}) {
    for (Variant v : {Variant::Tcp, Variant::Reno, Variant::NewReno, Variant::Vegas}) {
      const bool vegas = v == Variant::Vegas;
      add(rows, v, n, ProxyMode::None, vegas ? 80 : 180, vegas ? 90 : 130);
      add(rows, v, n, ProxyMode::Middle, vegas ? 90 : 240, vegas ? 150 : 400);
      add(rows, v, n, ProxyMode::SinkNeighbor, vegas ? 85 : 230, vegas ? 160 : 500);
    }
  }
  return rows;
}

TEST(Checks, TrendShapedGridPassesEveryCheck) {
  const Report r = build_report(trend_grid());
  ASSERT_EQ(r.checks.size(), 5u);
  for (const Check& c : r.checks) EXPECT_EQ(c.status, CheckStatus::Pass) << c.id << " " << c.name;
  EXPECT_TRUE(r.passed());
  std::ostringstream os;
  write_report(os, r);
  EXPECT_NE(os.str().find("Overall: PASS"), std::string::npos);
}

TEST(Checks, EachThresholdFailsWhenItsTrendIsAbsent) {
  auto rows = trend_grid();
  for (auto& r : rows) {
    if (r.scenario_id == "Vegas-n100-None-Medium") r.throughput_kbps = 150;  // 150/180 > 0.7
    if (r.scenario_id == "Vegas-n50-None-Medium") r.mean_delay_ms = 131;     // not lowest
    if (r.scenario_id == "Reno-n110-Middle-Medium") r.throughput_kbps = 200;  // 1.11 < 1.2
    if (r.scenario_id == "NewReno-n50-SinkNeighbor-Medium") r.mean_delay_ms = 190;  // 1.46 < 1.5
    if (r.scenario_id == "Tcp-n100-Middle-Medium") r.delivered = 80;  // PDR 0.8
  }
  for (auto& r : rows) r.pdr = static_cast<double>(r.delivered) / static_cast<double>(r.generated);
  const Report rep = build_report(rows);
  for (int id : {4, 5, 6, 7, 8}) {
    const Check& c = check(rep, id);
    EXPECT_EQ(c.status, CheckStatus::Fail) << id;
    ASSERT_FALSE(c.details.empty());
    EXPECT_EQ(c.details.front().rfind("FAIL: ", 0), 0u) << c.details.front();
  }
  EXPECT_NE(check(rep, 4).details.front().find("Vegas-n100-None-Medium"), std::string::npos);
  EXPECT_NE(check(rep, 6).details.front().find("Reno-n110-Middle-Medium"), std::string::npos);
  EXPECT_FALSE(rep.passed());
}

TEST(Checks, TooFewSeedsFail) {
  std::vector<MetricsRecord> rows;
  add(rows, Variant::Reno, 50, ProxyMode::None, 180, 130, 9);
  add(rows, Variant::Vegas, 50, ProxyMode::None, 80, 90, 10);
  const Report r = build_report(rows);
  const Check& c = check(r, 4);
  EXPECT_EQ(c.status, CheckStatus::Fail);
  EXPECT_NE(c.details.front().find("has 9 runs"), std::string::npos) << c.details.front();
}

TEST(Checks, ProxyChecksAreSkippedWithoutProxyResults) {
  std::vector<MetricsRecord> rows;
  add(rows, Variant::Reno, 50, ProxyMode::None, 180, 130);
  const Report r = build_report(rows);
  EXPECT_EQ(check(r, 6).status, CheckStatus::Skipped);
  EXPECT_EQ(check(r, 7).status, CheckStatus::Skipped);
  EXPECT_EQ(check(r, 4).status, CheckStatus::Fail);  // Vegas rows missing
}

TEST(Checks, ConservationViolationFailsThePdrCheck) {
  auto rows = trend_grid();
  rows[3].delivered = rows[3].generated + 1;
  EXPECT_EQ(check(build_report(rows), 8).status, CheckStatus::Fail);
  rows = trend_grid();
  rows[5].pdr = 0.5;  // inconsistent with its counts
  EXPECT_EQ(check(build_report(rows), 8).status, CheckStatus::Fail);
}

TEST(Json, SummaryIsMachineReadable) {
  auto rows = trend_grid();
  rows[0].throughput_kbps = 1e6;
  const Report r = build_report(rows);
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(j.at("passed").get<bool>(), r.passed());
  ASSERT_EQ(j.at("checks").size(), 5u);
  EXPECT_EQ(j.at("checks")[0].at("id").get<int>(), 4);
  EXPECT_TRUE(j.at("checks")[0].at("status").is_string());
  EXPECT_EQ(j.at("ratios").size(), r.ratios.size());
  EXPECT_TRUE(j.at("ratios")[0].contains("throughput_ratio"));
}

}  // namespace
