#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "wsn/app/message.hpp"
#include "wsn/sim/scheduler.hpp"
#include "wsn/tcp/connection.hpp"

namespace wsn::app {

struct BatchParams {
  SimTime interval = SimTime::from_seconds(1.0);
  std::uint64_t bytes = 4096;
};

// Section collection point: accepts whole messages from section members and
// re-originates them, unchanged, on its single connection to the sink.
// Messages are batched and flushed every batch interval or as soon as the
// batch reaches the byte threshold, whichever comes first; a flushed batch
// enters the outbound connection in creation order as send-buffer space
// allows.
class ProxyRelay {
 public:
  ProxyRelay(NodeId node, int section, sim::Scheduler& scheduler, BatchParams params,
             tcp::Connection& outbound, MessageStream& outbound_stream,
             std::function<int(NodeId)> section_of);

  // A complete message from an inbound connection.
  void accept(Message m);
  // Outbound send-buffer space became available.
  void on_writable();

  NodeId node() const { return node_; }
  int section() const { return section_; }
  std::uint64_t relayed() const { return relayed_; }
  std::uint64_t cross_section_drops() const { return cross_section_drops_; }
  std::size_t queued() const { return batch_.size() + ready_.size(); }
  std::uint64_t flushes() const { return flushes_; }

 private:
  void flush();
  void drain();

  NodeId node_;
  int section_;
  sim::Scheduler& scheduler_;
  BatchParams params_;
  tcp::Connection& outbound_;
  MessageStream& stream_;
  std::function<int(NodeId)> section_of_;
  std::vector<Message> batch_;
  std::uint64_t batch_bytes_ = 0;
  sim::EventHandle flush_timer_;
  std::deque<Message> ready_;
  std::uint64_t relayed_ = 0;
  std::uint64_t cross_section_drops_ = 0;
  std::uint64_t flushes_ = 0;
};

}  // namespace wsn::app
