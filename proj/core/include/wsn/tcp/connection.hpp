#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "wsn/phy/node.hpp"
#include "wsn/sim/scheduler.hpp"
#include "wsn/tcp/receiver.hpp"
#include "wsn/tcp/segment.hpp"
#include "wsn/tcp/sender.hpp"

namespace wsn::tcp {

using phy::NodeId;

// One long-lived connection from `src` to `dst` inside a simulation. Owns
// both halves (the sender state lives at src, the receiver state at dst)
// and the retransmission timer; segments leave through the transmit hook
// and come back through on_arrival().
class Connection {
 public:
  struct Hooks {
    // Hand a segment to the network layer at `from`, addressed to `to`.
    std::function<void(NodeId from, NodeId to, const Segment&)> transmit;
    // Receiver side: in-order byte range [first, last) reached the application.
    std::function<void(std::uint64_t first, std::uint64_t last)> on_delivered;
    // Sender side: the connection became established or send-buffer space
    // was released.
    std::function<void()> on_writable;
    // Sender side: the connection gave up and restarted; unacked data is gone.
    std::function<void()> on_reset;
    // Congestion-state trajectory (only changes are reported).
    std::function<void(const TracePoint&)> on_trace;
  };

  Connection(ConnId id, NodeId src, NodeId dst, Variant variant, TcpParams params,
             std::uint64_t send_buffer_bytes, sim::Scheduler& scheduler);

  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  void set_hooks(Hooks hooks) { hooks_ = std::move(hooks); }

  // Starts the handshake.
  void open();

  bool established() const { return sender_.established(); }
  // Bytes the application may write now (zero until established).
  std::uint64_t writable_bytes() const;
  // Appends application bytes; throws ModelError beyond writable_bytes().
  void write(std::uint64_t bytes);

  // A segment of this connection reached `at` (either endpoint).
  void on_arrival(NodeId at, const Segment& segment);

  ConnId id() const { return id_; }
  NodeId src() const { return src_; }
  NodeId dst() const { return dst_; }
  const Sender& sender() const { return sender_; }
  const Receiver& receiver() const { return receiver_; }
  std::uint64_t send_buffer_bytes() const { return send_buffer_bytes_; }

 private:
  void sync();
  void emit(NodeId from, NodeId to, Segment segment);
  void receiver_side(const Segment& segment);
  void sender_side(const Segment& segment);

  ConnId id_;
  NodeId src_;
  NodeId dst_;
  std::uint64_t send_buffer_bytes_;
  sim::Scheduler& scheduler_;
  Sender sender_;
  Receiver receiver_;
  std::uint32_t rx_incarnation_ = 0;
  bool rx_open_ = false;
  Hooks hooks_;
  std::optional<SimTime> armed_deadline_;
  sim::EventHandle timer_;
  std::uint64_t last_writable_ = 0;
  bool last_established_ = false;
  std::optional<TracePoint> last_trace_;
};

}  // namespace wsn::tcp
