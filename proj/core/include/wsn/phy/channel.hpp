#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "wsn/net/packet.hpp"
#include "wsn/phy/node.hpp"
#include "wsn/sim/rng.hpp"
#include "wsn/sim/scheduler.hpp"

namespace wsn::phy {

// Simplified 802.11 DCF. MAC-level acknowledgements are implicit: the sender
// learns at tx_end whether the addressed receiver decoded the frame.
struct MacParams {
  double data_rate_bps = 2e6;
  sim::SimTime difs = sim::SimTime::from_us(50);
  sim::SimTime slot = sim::SimTime::from_us(20);
  std::uint32_t cw_min = 31;
  std::uint32_t cw_max = 1023;
  std::uint32_t retry_limit = 7;
  std::uint32_t frame_overhead_bytes = 58;
  std::size_t ifq_limit = 50;
  double radio_range = 100.0;
};

enum class FrameKind : std::uint8_t { Data, MacAck, RoutingCtl };

struct Frame {
  std::uint64_t id = 0;
  NodeId src = 0;
  NodeId dst = 0;  // next hop, or kBroadcast
  FrameKind kind = FrameKind::Data;
  std::uint32_t payload_bytes = 0;
  sim::SimTime tx_start;
  sim::SimTime tx_end;
  std::uint32_t retry_count = 0;
  net::PacketPtr packet;
};

// Time on air for a frame carrying `payload_bytes` above the MAC.
sim::SimTime airtime(const MacParams& params, std::uint32_t payload_bytes);

// A frame as heard by one receiver.
struct HeardFrame {
  std::uint64_t frame_id = 0;
  sim::SimTime tx_start;
  sim::SimTime tx_end;
};

// No-capture reception rule for frames that all overlap at one receiver:
// exactly one frame decodes, two or more destroy each other.
std::optional<std::uint64_t> resolve_reception(std::span<const HeardFrame> overlapping);

// General form over an arbitrary set of heard frames: a frame decodes iff no
// other frame intersects its [tx_start, tx_end) interval. Returned in input order.
std::vector<std::uint64_t> decodable_frames(std::span<const HeardFrame> heard);

struct MacStats {
  std::uint64_t enqueued = 0;
  std::uint64_t ifq_drops = 0;
  std::uint64_t transmissions = 0;
  std::uint64_t unicast_delivered = 0;
  std::uint64_t broadcast_receptions = 0;
  std::uint64_t corrupted_receptions = 0;
  std::uint64_t retry_drops = 0;
};

// Shared medium plus per-node CSMA/CA state for every node in `nodes`.
class Channel {
 public:
  struct Hooks {
    std::function<void(NodeId receiver, const Frame&)> on_receive;
    std::function<void(NodeId sender, const Frame&)> on_link_break;
    std::function<void(NodeId sender, const Frame&)> on_ifq_drop;
    // Observation only: every transmission attempt and its outcome.
    std::function<void(const Frame&)> on_attempt;
    std::function<void(NodeId sender, const Frame&, bool acked)> on_tx_done;
  };
  // Backoff slot draw for `node` given contention window `cw`; result in [0, cw].
  using BackoffSource = std::function<std::uint32_t(NodeId node, std::uint32_t cw)>;

  Channel(sim::Scheduler& scheduler, std::vector<NodeState>& nodes, MacParams params,
          sim::RngStream& backoff_rng);

  void set_hooks(Hooks hooks) { hooks_ = std::move(hooks); }
  void set_backoff_source(BackoffSource source) { backoff_ = std::move(source); }

  const MacParams& params() const { return params_; }
  const MacStats& stats() const { return stats_; }

  // Queues a frame for transmission to `next_hop`. Routing control frames
  // jump ahead of data. Returns false (and reports on_ifq_drop) when full.
  bool enqueue(NodeId node, FrameKind kind, NodeId next_hop, net::PacketPtr packet);

  // Removes queued frames addressed to `next_hop` that are not already in
  // service; returns the removed frames.
  std::vector<Frame> purge(NodeId node, NodeId next_hop);

  std::size_t queue_length(NodeId node) const { return macs_[node].queue.size(); }
  bool busy(NodeId node) const;
  bool in_range(NodeId a, NodeId b) const;

 private:
  enum class Phase : std::uint8_t { Idle, Deferring, Countdown, Transmitting };

  struct Incoming {
    std::uint64_t tx_id;
    std::size_t slot;  // index into Transmission::receivers
  };

  struct Mac {
    std::deque<Frame> queue;  // front is in service when phase != Idle
    Phase phase = Phase::Idle;
    std::uint32_t cw = 0;
    std::uint32_t retries = 0;
    std::uint32_t backoff_slots = 0;
    sim::SimTime countdown_start;
    sim::SimTime fire_at;
    sim::EventHandle fire_event;
    bool transmitting = false;
    std::vector<Incoming> incoming;
  };

  struct Receiver {
    NodeId node;
    bool corrupted;
  };

  struct Transmission {
    Frame frame;
    std::vector<Receiver> receivers;
  };

  void start_access(NodeId node);
  void begin_countdown(NodeId node);
  void fire(NodeId node);
  void finish(std::uint64_t tx_id);
  void on_busy_onset(NodeId node);
  void on_idle(NodeId node);

  sim::Scheduler& scheduler_;
  std::vector<NodeState>& nodes_;
  MacParams params_;
  sim::RngStream& rng_;
  BackoffSource backoff_;
  Hooks hooks_;
  std::vector<Mac> macs_;
  std::unordered_map<std::uint64_t, Transmission> active_;
  std::uint64_t next_frame_id_ = 1;
  std::uint64_t next_tx_id_ = 1;
  MacStats stats_;
};

}  // namespace wsn::phy
