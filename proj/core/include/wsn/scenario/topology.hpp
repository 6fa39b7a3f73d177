#pragma once

#include <cstdint>
#include <vector>

#include "wsn/app/sections.hpp"
#include "wsn/phy/node.hpp"
#include "wsn/scenario/config.hpp"
#include "wsn/sim/rng.hpp"

namespace wsn::scenario {

inline constexpr phy::NodeId kSink = 0;
inline constexpr std::uint32_t kMaxPlacementAttempts = 100;

struct Topology {
  std::vector<phy::Vec2> positions;  // index = node id; node 0 is the sink
  app::SectionMap sections;          // proxies filled in unless proxy_mode is None
  std::uint32_t attempts = 0;        // placement draws used
};

// Pins the sink at the field centre and draws every other node uniformly
// (x, then y) from `placement`. The whole placement is redrawn while some
// quadrant holds no node besides the sink; after kMaxPlacementAttempts the
// scenario is rejected with ConfigError.
Topology generate_topology(const ScenarioConfig& cfg, sim::RngStream& placement);

}  // namespace wsn::scenario
