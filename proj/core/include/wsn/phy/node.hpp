#pragma once

#include <cmath>
#include <cstdint>

#include "wsn/sim/time.hpp"

namespace wsn::phy {

using NodeId = std::uint32_t;
inline constexpr NodeId kBroadcast = 0xffffffffu;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

enum class Role : std::uint8_t { Sensor, Proxy, Sink };

const char* to_string(Role role);

struct NodeState {
  NodeId id = 0;
  Vec2 position;
  Vec2 waypoint;
  double speed = 0.0;  // m/s; zero while paused or stationary
  sim::SimTime pause_until;
  Role role = Role::Sensor;
  int section = 0;
  bool mobile = true;
};

// Unit-disk connectivity with a closed boundary: exactly `range` apart is
// still in range.
inline bool in_range(const NodeState& a, const NodeState& b, double range) {
  return distance(a.position, b.position) <= range;
}

}  // namespace wsn::phy
