#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "wsn/phy/node.hpp"
#include "wsn/sim/time.hpp"

namespace wsn::app {

using phy::NodeId;
using sim::SimTime;

// Application datum. Survives the proxy relay unchanged except for the
// per-leg instrumentation timestamps.
struct Message {
  std::uint64_t id = 0;
  NodeId origin = 0;
  SimTime created_at;
  std::uint32_t size_bytes = 0;
  std::optional<SimTime> proxy_arrival;    // reached the proxy application
  std::optional<SimTime> proxy_departure;  // written into the proxy->sink connection
  std::optional<SimTime> delivered_at;     // reached the sink application
};

// Message framing over one connection's byte stream: remembers where each
// written message ends so that delivered byte ranges can be turned back
// into whole messages.
class MessageStream {
 public:
  // Records `m` as occupying the next m.size_bytes bytes of the stream.
  void push(const Message& m);
  // The receiving application now holds bytes [0, delivered_end); returns the
  // messages completed by it, in order.
  std::vector<Message> complete(std::uint64_t delivered_end);
  // Connection reset: the stream restarts at offset 0; returns the messages
  // that were written but never completed.
  std::vector<Message> reset();

  std::size_t in_flight() const { return pending_.size(); }
  std::uint64_t written_bytes() const { return write_offset_; }

 private:
  struct Entry {
    std::uint64_t end;
    Message message;
  };
  std::deque<Entry> pending_;
  std::uint64_t write_offset_ = 0;
};

}  // namespace wsn::app
