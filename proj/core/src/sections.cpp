#include "wsn/app/sections.hpp"

#include <limits>
#include <string>

#include "wsn/error.hpp"

namespace wsn::app {

const char* to_string(ProxyMode mode) {
  switch (mode) {
    case ProxyMode::None: return "None";
    case ProxyMode::Middle: return "Middle";
    case ProxyMode::SinkNeighbor: return "SinkNeighbor";
  }
  return "unknown";
}

std::optional<ProxyMode> parse_proxy_mode(std::string_view text) {
  for (ProxyMode m : {ProxyMode::None, ProxyMode::Middle, ProxyMode::SinkNeighbor}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

int quadrant_of(Vec2 p, double side) {
  const double half = side / 2.0;
  return (p.x > half ? 1 : 0) + (p.y > half ? 2 : 0);
}

Vec2 quadrant_centroid(int q, double side) {
  const double quarter = side / 4.0;
  return Vec2{(q & 1) ? 3 * quarter : quarter, (q & 2) ? 3 * quarter : quarter};
}

SectionMap assign_sections(std::span<const Vec2> positions, double side) {
  SectionMap map;
  map.section_of.reserve(positions.size());
  for (const Vec2& p : positions) map.section_of.push_back(quadrant_of(p, side));
  return map;
}

bool all_sections_populated(const SectionMap& sections, NodeId sink) {
  std::array<bool, kSectionCount> seen{};
  for (NodeId id = 0; id < sections.section_of.size(); ++id) {
    if (id != sink) seen[sections.section_of[id]] = true;
  }
  for (bool s : seen) {
    if (!s) return false;
  }
  return true;
}

std::array<NodeId, kSectionCount> select_proxies(ProxyMode mode, const SectionMap& sections,
                                                 std::span<const Vec2> positions, NodeId sink,
                                                 double side) {
  if (mode == ProxyMode::None) throw ModelError("proxy selection requested in non-proxy mode");
  if (sections.section_of.size() != positions.size()) {
    throw ModelError("section map and positions disagree in size");
  }
  std::array<NodeId, kSectionCount> chosen{};
  for (int q = 0; q < kSectionCount; ++q) {
    const Vec2 target = mode == ProxyMode::Middle ? quadrant_centroid(q, side) : positions[sink];
    double best = std::numeric_limits<double>::infinity();
    std::optional<NodeId> pick;
    for (NodeId id = 0; id < positions.size(); ++id) {
      if (id == sink || sections.section_of[id] != q) continue;
      const double d = phy::distance(positions[id], target);
      if (d < best) {  // strict: earlier (lower) id wins ties
        best = d;
        pick = id;
      }
    }
    if (!pick) throw ConfigError("section " + std::to_string(q) + " has no proxy candidate");
    chosen[q] = *pick;
  }
  return chosen;
}

}  // namespace wsn::app
