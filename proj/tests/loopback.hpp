#pragma once

// One transport connection whose segments reach the other endpoint after a
// fixed one-way delay, with no loss: enough to drive application logic.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "wsn/app/message.hpp"
#include "wsn/sim/scheduler.hpp"
#include "wsn/tcp/connection.hpp"

namespace wsn::testing {

class Loopback {
 public:
  Loopback(sim::Scheduler& scheduler, phy::NodeId src, phy::NodeId dst,
           std::uint64_t send_buffer_bytes, sim::SimTime one_way = sim::SimTime::from_us(5000))
      : scheduler_(scheduler),
        conn_(1, src, dst, tcp::Variant::Reno, tcp::TcpParams{}, send_buffer_bytes, scheduler) {
    conn_.set_hooks(tcp::Connection::Hooks{
        .transmit =
            [this, one_way](phy::NodeId, phy::NodeId to, const tcp::Segment& s) {
              scheduler_.schedule_in(one_way, sim::EventKind::FrameArrival, to,
                                     [this, to, s] { conn_.on_arrival(to, s); });
            },
        .on_delivered =
            [this](std::uint64_t, std::uint64_t last) {
              for (app::Message& m : stream_.complete(last)) {
                m.delivered_at = scheduler_.now();
                delivered.push_back(std::move(m));
              }
            },
        .on_writable = [this] { if (on_writable) on_writable(); },
        .on_reset = {},
        .on_trace = {},
    });
  }

  tcp::Connection& connection() { return conn_; }
  app::MessageStream& stream() { return stream_; }

  std::function<void()> on_writable;
  std::vector<app::Message> delivered;

 private:
  sim::Scheduler& scheduler_;
  tcp::Connection conn_;
  app::MessageStream stream_;
};

}  // namespace wsn::testing
