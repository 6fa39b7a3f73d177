#include "wsn/scenario/topology.hpp"

#include <string>

#include "wsn/error.hpp"

namespace wsn::scenario {

Topology generate_topology(const ScenarioConfig& cfg, sim::RngStream& placement) {
  cfg.validate();
  const double side = cfg.area_side;
  Topology topo;
  topo.positions.resize(cfg.node_count);
  for (std::uint32_t attempt = 1; attempt <= kMaxPlacementAttempts; ++attempt) {
    topo.positions[kSink] = phy::Vec2{side / 2, side / 2};
    for (std::uint32_t i = 1; i < cfg.node_count; ++i) {
      const double x = placement.uniform(0.0, side);
      const double y = placement.uniform(0.0, side);
      topo.positions[i] = phy::Vec2{x, y};
    }
    topo.sections = app::assign_sections(topo.positions, side);
    if (!app::all_sections_populated(topo.sections, kSink)) continue;
    topo.attempts = attempt;
    if (cfg.proxy_mode != app::ProxyMode::None) {
      const auto proxies =
          app::select_proxies(cfg.proxy_mode, topo.sections, topo.positions, kSink, side);
      for (int q = 0; q < app::kSectionCount; ++q) topo.sections.proxy[q] = proxies[q];
    }
    return topo;
  }
  throw ConfigError("no placement with every quadrant populated after " +
                    std::to_string(kMaxPlacementAttempts) + " attempts (node_count=" +
                    std::to_string(cfg.node_count) + ")");
}

}  // namespace wsn::scenario
