#include <gtest/gtest.h>

#include <array>

#include "wsn/app/sections.hpp"
#include "wsn/scenario/config.hpp"
#include "wsn/scenario/topology.hpp"
#include "wsn/sim/rng.hpp"

namespace {

using namespace wsn::scenario;
using wsn::app::ProxyMode;
using wsn::sim::RngStream;
using wsn::sim::StreamId;

ScenarioConfig config(std::uint32_t n, ProxyMode mode = ProxyMode::None) {
  ScenarioConfig cfg;
  cfg.node_count = n;
  cfg.proxy_mode = mode;
  return cfg;
}

TEST(Topology, SinkAtTheCentreAndEveryNodeInsideTheField) {
  RngStream rng(1, StreamId::Placement);
  const Topology t = generate_topology(config(110), rng);
  ASSERT_EQ(t.positions.size(), 110u);
  EXPECT_EQ(t.positions[kSink].x, 500.0);
  EXPECT_EQ(t.positions[kSink].y, 500.0);
  for (const auto& p : t.positions) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LE(p.x, 1000.0);
    EXPECT_GE(p.y, 0.0);
    EXPECT_LE(p.y, 1000.0);
  }
  EXPECT_GE(t.attempts, 1u);
  for (const auto& proxy : t.sections.proxy) EXPECT_FALSE(proxy.has_value());
}

TEST(Topology, SameSeedSamePlacement) {
  RngStream a(42, StreamId::Placement), b(42, StreamId::Placement), c(43, StreamId::Placement);
  const Topology ta = generate_topology(config(50), a);
  const Topology tb = generate_topology(config(50), b);
  const Topology tc = generate_topology(config(50), c);
  for (std::size_t i = 0; i < ta.positions.size(); ++i) {
    EXPECT_EQ(ta.positions[i].x, tb.positions[i].x);
    EXPECT_EQ(ta.positions[i].y, tb.positions[i].y);
  }
  EXPECT_NE(ta.positions[1].x, tc.positions[1].x);
}

TEST(Topology, ProxyModesSelectOneProxyPerQuadrant) {
  for (ProxyMode mode : {ProxyMode::Middle, ProxyMode::SinkNeighbor}) {
    RngStream rng(5, StreamId::Placement);
    const Topology t = generate_topology(config(50, mode), rng);
    for (int q = 0; q < wsn::app::kSectionCount; ++q) {
      ASSERT_TRUE(t.sections.proxy[q].has_value());
      EXPECT_NE(*t.sections.proxy[q], kSink);
      EXPECT_EQ(t.sections.section_of[*t.sections.proxy[q]], q);
    }
  }
}

TEST(Topology, SmallPopulationsAreRedrawnUntilEveryQuadrantIsOccupied) {
  // Five nodes: the four non-sink nodes must land in four distinct quadrants,
  // which a single draw achieves with probability 4!/4^4 ~ 9%.
  std::uint32_t redrawn = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RngStream rng(seed, StreamId::Placement);
    const Topology t = generate_topology(config(5), rng);
    EXPECT_TRUE(wsn::app::all_sections_populated(t.sections, kSink));
    EXPECT_LE(t.attempts, kMaxPlacementAttempts);
    if (t.attempts > 1) ++redrawn;
  }
  EXPECT_GT(redrawn, 10u);
}

TEST(Topology, NodesFallIntoEachQuadrantUniformly) {
  std::array<std::uint64_t, 4> counts{};
  std::uint64_t total = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    RngStream rng(seed, StreamId::Placement);
    const Topology t = generate_topology(config(101), rng);
    for (std::size_t i = 1; i < t.positions.size(); ++i) {
      ++counts[static_cast<std::size_t>(t.sections.section_of[i])];
      ++total;
    }
  }
  ASSERT_EQ(total, 10'000u);
  for (auto c : counts) {
    EXPECT_NEAR(static_cast<double>(c) / static_cast<double>(total), 0.25, 0.02);
  }
}

}  // namespace
