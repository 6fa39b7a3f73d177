#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wsn/phy/node.hpp"

namespace wsn::app {

using phy::NodeId;
using phy::Vec2;

inline constexpr int kSectionCount = 4;

enum class ProxyMode : std::uint8_t { None, Middle, SinkNeighbor };

const char* to_string(ProxyMode mode);
std::optional<ProxyMode> parse_proxy_mode(std::string_view text);

// Quadrant of a position in a square field of side `side`:
// bit 0 set when x > side/2, bit 1 set when y > side/2. Coordinates exactly
// on a split line fall into the lower-index quadrant.
int quadrant_of(Vec2 p, double side);

// Centre of quadrant `q`.
Vec2 quadrant_centroid(int q, double side);

struct SectionMap {
  std::vector<int> section_of;  // per node
  std::array<std::optional<NodeId>, kSectionCount> proxy{};
};

// Assigns every node to its quadrant by its position at t=0.
SectionMap assign_sections(std::span<const Vec2> positions, double side);

// Per quadrant, the node nearest the quadrant centre (Middle) or nearest the
// sink (SinkNeighbor), ties to the lowest id; the sink itself is never a
// candidate. Throws ConfigError naming the quadrant if one has no candidate.
std::array<NodeId, kSectionCount> select_proxies(ProxyMode mode, const SectionMap& sections,
                                                 std::span<const Vec2> positions, NodeId sink,
                                                 double side);

// True when every quadrant holds at least one node other than the sink.
bool all_sections_populated(const SectionMap& sections, NodeId sink);

}  // namespace wsn::app
