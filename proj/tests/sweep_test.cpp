#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "wsn/error.hpp"
#include "wsn/metrics/record.hpp"
#include "wsn/scenario/sweep.hpp"

namespace {

using namespace wsn::scenario;
using wsn::app::ProxyMode;
using wsn::tcp::Variant;

std::string csv_of(const SweepResult& r) {
  std::ostringstream os;
  wsn::metrics::write_csv(os, r.records());
  return os.str();
}

TEST(SeedList, RangesAndListsExpandInOrder) {
  EXPECT_EQ(parse_seed_list("1..3,7,10..11"), (std::vector<std::uint64_t>{1, 2, 3, 7, 10, 11}));
  EXPECT_EQ(parse_seed_list("5"), (std::vector<std::uint64_t>{5}));
  EXPECT_THROW(parse_seed_list("1..3,2"), wsn::ConfigError);
  EXPECT_THROW(parse_seed_list("4..2"), wsn::ConfigError);
  EXPECT_THROW(parse_seed_list("x"), wsn::ConfigError);
}

TEST(SweepGrid, CartesianProductWithTheFirstAxisSlowest) {
  const SweepSpec spec = parse_sweep(
      "# two axes\nvariant=Reno,Vegas\nnode_count=50, 100,110\nproxy_mode=Middle\nseeds=1..4\n"
      "parallelism=3\n");
  ASSERT_EQ(spec.configs.size(), 6u);
  EXPECT_EQ(spec.configs[0].scenario_id(), "Reno-n50-Middle-Medium");
  EXPECT_EQ(spec.configs[1].scenario_id(), "Reno-n100-Middle-Medium");
  EXPECT_EQ(spec.configs[3].scenario_id(), "Vegas-n50-Middle-Medium");
  EXPECT_EQ(spec.configs[5].scenario_id(), "Vegas-n110-Middle-Medium");
  EXPECT_EQ(spec.seeds.size(), 4u);
  EXPECT_EQ(spec.parallelism, 3u);
  EXPECT_EQ(spec.run_count(), 24u);
}

TEST(SweepGrid, DefaultsToTenSeedsAndOneThread) {
  const SweepSpec spec = parse_sweep("node_count=100\n");
  ASSERT_EQ(spec.configs.size(), 1u);
  EXPECT_EQ(spec.seeds, parse_seed_list("1..10"));
  EXPECT_EQ(spec.parallelism, 1u);
}

TEST(SweepGrid, EmptyFileIsTheEmptySweep) {
  const SweepSpec spec = parse_sweep("# nothing here\n\n");
  EXPECT_TRUE(spec.configs.empty());
  EXPECT_EQ(spec.run_count(), 0u);
  const SweepResult r = run_sweep(spec);
  EXPECT_TRUE(r.runs.empty());
  EXPECT_EQ(csv_of(r), std::string(wsn::metrics::kCsvHeader) + "\n");
}

TEST(SweepGrid, ErrorsCarryTheLineNumber) {
  auto what = [](const char* text) -> std::string {
    try {
      parse_sweep(text, "g.sweep");
    } catch (const wsn::ConfigError& e) {
      return e.what();
    }
    return {};
  };
  EXPECT_NE(what("variant=Reno\nnode_count=50,abc\n").find("g.sweep:2"), std::string::npos);
  EXPECT_NE(what("seed=3\n").find("seeds"), std::string::npos);
  EXPECT_NE(what("variant=Reno\nvariant=Vegas\n").find("twice"), std::string::npos);
  EXPECT_NE(what("parallelism=0\n").find("parallelism"), std::string::npos);
  EXPECT_NE(what("node_count=3,50\n").find("grid point"), std::string::npos);
}

TEST(ReferenceGrid, FourVariantsThreeSizesThreeModes) {
  const SweepSpec spec = reference_grid(parse_seed_list("1..10"), 4);
  EXPECT_EQ(spec.configs.size(), 36u);
  EXPECT_EQ(spec.run_count(), 360u);
  std::set<std::string> ids;
  for (const auto& c : spec.configs) ids.insert(c.scenario_id());
  EXPECT_EQ(ids.size(), 36u);
  EXPECT_TRUE(ids.contains("Vegas-n110-SinkNeighbor-Medium"));
}

SweepSpec quick_grid(unsigned parallelism) {
  SweepSpec spec = parse_sweep(
      "variant=Tcp,Vegas\nproxy_mode=None,Middle\nnode_count=30\nduration_s=40\nwarmup_s=10\n"
      "seeds=1..3\n");
  spec.parallelism = parallelism;
  return spec;
}

TEST(Sweep, OutputDoesNotDependOnParallelism) {
  const SweepResult serial = run_sweep(quick_grid(1));
  const SweepResult parallel = run_sweep(quick_grid(4));
  ASSERT_EQ(serial.runs.size(), 12u);
  EXPECT_EQ(serial.failures(), 0u);
  EXPECT_EQ(csv_of(serial), csv_of(parallel));
  for (std::size_t i = 0; i < serial.runs.size(); ++i) {
    EXPECT_EQ(serial.runs[i].dispatch_hash, parallel.runs[i].dispatch_hash);
  }
}

TEST(Sweep, RunsAreSortedByKeyAndReportProgress) {
  std::size_t calls = 0, last = 0;
  const SweepResult r = run_sweep(quick_grid(2), [&](std::size_t done, std::size_t total) {
    ++calls;
    EXPECT_EQ(total, 12u);
    EXPECT_EQ(done, last + 1);
    last = done;
  });
  EXPECT_EQ(calls, 12u);
  for (std::size_t i = 1; i < r.runs.size(); ++i) {
    EXPECT_FALSE(wsn::metrics::key_less(r.runs[i].record, r.runs[i - 1].record));
  }
}

TEST(Sweep, FailedRunKeepsItsKeyAndReportsTheError) {
  SweepSpec spec;
  ScenarioConfig bad;
  bad.variant = Variant::NewReno;
  bad.node_count = 60;
  bad.speed_min = 0.0;  // rejected when the run starts
  spec.configs.push_back(bad);
  spec.seeds = {5};
  const SweepResult r = run_sweep(spec);
  ASSERT_EQ(r.runs.size(), 1u);
  EXPECT_EQ(r.failures(), 1u);
  const RunOutcome& run = r.runs[0];
  ASSERT_TRUE(run.error.has_value());
  EXPECT_NE(run.error->find("speed_min"), std::string::npos) << *run.error;
  EXPECT_EQ(run.record.scenario_id, "NewReno-n60-None-Medium");
  EXPECT_EQ(run.record.seed, 5u);
  EXPECT_TRUE(std::isnan(run.record.throughput_kbps));
  EXPECT_TRUE(std::isnan(run.record.pdr));
}

}  // namespace
