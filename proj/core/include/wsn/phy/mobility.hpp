#pragma once

#include "wsn/phy/node.hpp"
#include "wsn/sim/rng.hpp"
#include "wsn/sim/time.hpp"

namespace wsn::phy {

struct MobilityParams {
  double area_side = 1000.0;
  double speed_min = 1.0;
  double speed_max = 5.0;
  double pause_s = 2.0;
};

// Random waypoint. Draws a fresh waypoint (uniform over the field) followed by
// a speed (uniform in [speed_min, speed_max]) from `rng`.
class RandomWaypoint {
 public:
  explicit RandomWaypoint(MobilityParams params);

  const MobilityParams& params() const { return params_; }

  // Assigns the first waypoint and speed to a freshly placed node.
  void start(NodeState& node, sim::RngStream& rng) const;

  // Advances `node` from time `now` by `dt` seconds (dt > 0). Travel toward
  // the waypoint at constant speed; on arrival the node pauses for pause_s,
  // then draws its next leg. A single step may cover several legs.
  void step(NodeState& node, sim::SimTime now, double dt, sim::RngStream& rng) const;

 private:
  void draw_leg(NodeState& node, sim::RngStream& rng) const;

  MobilityParams params_;
};

}  // namespace wsn::phy
