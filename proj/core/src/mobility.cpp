#include "wsn/phy/mobility.hpp"

#include <algorithm>

#include "wsn/error.hpp"

namespace wsn::phy {

const char* to_string(Role role) {
  switch (role) {
    case Role::Sensor: return "sensor";
    case Role::Proxy: return "proxy";
    case Role::Sink: return "sink";
  }
  return "unknown";
}

RandomWaypoint::RandomWaypoint(MobilityParams params) : params_(params) {
  if (params_.speed_min <= 0.0 || params_.speed_max < params_.speed_min) {
    throw ConfigError("mobility speeds must satisfy 0 < speed_min <= speed_max");
  }
}

void RandomWaypoint::draw_leg(NodeState& node, sim::RngStream& rng) const {
  node.waypoint.x = rng.uniform(0.0, params_.area_side);
  node.waypoint.y = rng.uniform(0.0, params_.area_side);
  node.speed = rng.uniform(params_.speed_min, params_.speed_max);
}

void RandomWaypoint::start(NodeState& node, sim::RngStream& rng) const {
  if (!node.mobile) return;
  draw_leg(node, rng);
}

void RandomWaypoint::step(NodeState& node, sim::SimTime now, double dt,
                          sim::RngStream& rng) const {
  if (dt <= 0.0) throw ModelError("mobility step requires dt > 0");
  if (!node.mobile) return;

  double t = now.seconds();
  const double t_end = t + dt;
  while (t < t_end) {
    if (node.speed == 0.0) {
      const double resume = node.pause_until.seconds();
      if (resume >= t_end) return;
      t = std::max(t, resume);
      draw_leg(node, rng);
      continue;
    }
    const double dx = node.waypoint.x - node.position.x;
    const double dy = node.waypoint.y - node.position.y;
    const double remaining = std::hypot(dx, dy);
    const double reach = node.speed * (t_end - t);
    if (reach < remaining) {
      const double f = reach / remaining;
      node.position.x += dx * f;
      node.position.y += dy * f;
      break;
    }
    t += remaining / node.speed;
    node.position = node.waypoint;
    node.speed = 0.0;
    node.pause_until = sim::SimTime::from_seconds(t + params_.pause_s);
  }
  node.position.x = std::clamp(node.position.x, 0.0, params_.area_side);
  node.position.y = std::clamp(node.position.y, 0.0, params_.area_side);
}

}  // namespace wsn::phy
