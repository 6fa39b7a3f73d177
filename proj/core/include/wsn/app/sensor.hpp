#pragma once

#include <cstdint>
#include <functional>

#include "wsn/app/message.hpp"
#include "wsn/sim/scheduler.hpp"
#include "wsn/tcp/connection.hpp"

namespace wsn::app {

struct TrafficParams {
  SimTime interval = SimTime::from_seconds(2.0);
  std::uint32_t message_size = 512;
};

// Constant-interval reporting source. Each tick produces one message and
// writes it into the node's connection; while the connection cannot take a
// whole message (not yet established, or send buffer full) the source is
// blocked and the tick produces nothing.
class SensorApp {
 public:
  using OnGenerate = std::function<void(const Message&)>;

  SensorApp(NodeId node, sim::Scheduler& scheduler, TrafficParams params,
            tcp::Connection& connection, MessageStream& stream, std::uint64_t& id_counter,
            OnGenerate on_generate);

  // First tick at `first`, then every interval.
  void start(SimTime first);

  NodeId node() const { return node_; }
  std::uint64_t generated() const { return generated_; }
  std::uint64_t blocked_ticks() const { return blocked_; }

 private:
  void tick();

  NodeId node_;
  sim::Scheduler& scheduler_;
  TrafficParams params_;
  tcp::Connection& connection_;
  MessageStream& stream_;
  std::uint64_t& id_counter_;
  OnGenerate on_generate_;
  std::uint64_t generated_ = 0;
  std::uint64_t blocked_ = 0;
};

}  // namespace wsn::app
