#include "wsn/phy/channel.hpp"

#include <algorithm>
#include <cmath>

#include "wsn/error.hpp"

namespace wsn::phy {

using sim::EventKind;
using sim::SimTime;

SimTime airtime(const MacParams& params, std::uint32_t payload_bytes) {
  const double bits = 8.0 * (payload_bytes + params.frame_overhead_bytes);
  return SimTime::from_ns(static_cast<std::int64_t>(std::llround(bits * 1e9 / params.data_rate_bps)));
}

namespace {

bool overlaps(const HeardFrame& a, const HeardFrame& b) {
  return a.tx_start < b.tx_end && b.tx_start < a.tx_end;
}

}  // namespace

std::optional<std::uint64_t> resolve_reception(std::span<const HeardFrame> overlapping) {
  if (overlapping.size() == 1) return overlapping.front().frame_id;
  return std::nullopt;
}

std::vector<std::uint64_t> decodable_frames(std::span<const HeardFrame> heard) {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < heard.size(); ++i) {
    bool clean = true;
    for (std::size_t j = 0; j < heard.size() && clean; ++j) {
      if (i != j && overlaps(heard[i], heard[j])) clean = false;
    }
    if (clean) out.push_back(heard[i].frame_id);
  }
  return out;
}

Channel::Channel(sim::Scheduler& scheduler, std::vector<NodeState>& nodes, MacParams params,
                 sim::RngStream& backoff_rng)
    : scheduler_(scheduler), nodes_(nodes), params_(params), rng_(backoff_rng), macs_(nodes.size()) {
  for (auto& mac : macs_) mac.cw = params_.cw_min;
  backoff_ = [this](NodeId, std::uint32_t cw) {
    return static_cast<std::uint32_t>(rng_.uniform_int(0, cw));
  };
}

bool Channel::busy(NodeId node) const {
  const Mac& mac = macs_[node];
  return mac.transmitting || !mac.incoming.empty();
}

bool Channel::in_range(NodeId a, NodeId b) const {
  return phy::in_range(nodes_[a], nodes_[b], params_.radio_range);
}

bool Channel::enqueue(NodeId node, FrameKind kind, NodeId next_hop, net::PacketPtr packet) {
  Mac& mac = macs_[node];
  Frame frame;
  frame.id = next_frame_id_++;
  frame.src = node;
  frame.dst = next_hop;
  frame.kind = kind;
  frame.payload_bytes = packet->size_bytes();
  frame.packet = std::move(packet);

  if (mac.queue.size() >= params_.ifq_limit) {
    ++stats_.ifq_drops;
    if (hooks_.on_ifq_drop) hooks_.on_ifq_drop(node, frame);
    return false;
  }
  ++stats_.enqueued;
  if (kind == FrameKind::RoutingCtl) {
    auto it = mac.queue.begin();
    if (mac.phase != Phase::Idle && it != mac.queue.end()) ++it;
    while (it != mac.queue.end() && it->kind == FrameKind::RoutingCtl) ++it;
    mac.queue.insert(it, std::move(frame));
  } else {
    mac.queue.push_back(std::move(frame));
  }
  if (mac.phase == Phase::Idle) start_access(node);
  return true;
}

std::vector<Frame> Channel::purge(NodeId node, NodeId next_hop) {
  Mac& mac = macs_[node];
  std::vector<Frame> removed;
  auto first = mac.queue.begin();
  if (mac.phase != Phase::Idle && first != mac.queue.end()) ++first;
  auto keep = std::stable_partition(first, mac.queue.end(),
                                    [&](const Frame& f) { return f.dst != next_hop; });
  std::move(keep, mac.queue.end(), std::back_inserter(removed));
  mac.queue.erase(keep, mac.queue.end());
  return removed;
}

void Channel::start_access(NodeId node) {
  Mac& mac = macs_[node];
  if (mac.queue.empty()) {
    mac.phase = Phase::Idle;
    return;
  }
  mac.backoff_slots = backoff_(node, mac.cw);
  if (mac.backoff_slots > mac.cw) throw ModelError("backoff draw exceeds contention window");
  if (busy(node)) {
    mac.phase = Phase::Deferring;
  } else {
    begin_countdown(node);
  }
}

void Channel::begin_countdown(NodeId node) {
  Mac& mac = macs_[node];
  mac.phase = Phase::Countdown;
  mac.countdown_start = scheduler_.now();
  mac.fire_at = mac.countdown_start + params_.difs + params_.slot * mac.backoff_slots;
  mac.fire_event = scheduler_.schedule(mac.fire_at, EventKind::TimerExpiry, node,
                                       [this, node] { fire(node); });
}

void Channel::on_busy_onset(NodeId node) {
  Mac& mac = macs_[node];
  if (mac.phase != Phase::Countdown) return;
  const SimTime now = scheduler_.now();
  // Clear-channel assessment needs a slot; a transmission that starts inside
  // the last slot of the countdown goes unnoticed and the node fires anyway.
  if (mac.fire_at - now < params_.slot) return;
  scheduler_.cancel(mac.fire_event);
  const SimTime elapsed = now - mac.countdown_start;
  if (elapsed > params_.difs) {
    const auto consumed =
        static_cast<std::uint32_t>((elapsed - params_.difs).ns() / params_.slot.ns());
    mac.backoff_slots -= std::min(consumed, mac.backoff_slots);
  }
  mac.phase = Phase::Deferring;
}

void Channel::on_idle(NodeId node) {
  Mac& mac = macs_[node];
  if (mac.phase == Phase::Deferring) begin_countdown(node);
}

void Channel::fire(NodeId node) {
  Mac& mac = macs_[node];
  if (mac.queue.empty()) throw ModelError("MAC fired with an empty queue");
  const SimTime now = scheduler_.now();
  Frame& head = mac.queue.front();
  head.tx_start = now;
  head.tx_end = now + airtime(params_, head.payload_bytes);
  head.retry_count = mac.retries;
  mac.phase = Phase::Transmitting;
  ++stats_.transmissions;
  if (hooks_.on_attempt) hooks_.on_attempt(head);

  const std::uint64_t tx_id = next_tx_id_++;
  Transmission tx{head, {}};

  // Half duplex: anything the sender was receiving is lost.
  for (const Incoming& in : mac.incoming) active_.at(in.tx_id).receivers[in.slot].corrupted = true;
  mac.transmitting = true;

  std::vector<NodeId> became_busy;
  for (NodeId r = 0; r < nodes_.size(); ++r) {
    if (r == node || !in_range(node, r)) continue;
    Mac& rx = macs_[r];
    const bool was_busy = busy(r);
    bool corrupted = rx.transmitting;
    if (!rx.incoming.empty()) {
      corrupted = true;
      for (const Incoming& in : rx.incoming) active_.at(in.tx_id).receivers[in.slot].corrupted = true;
    }
    rx.incoming.push_back(Incoming{tx_id, tx.receivers.size()});
    tx.receivers.push_back(Receiver{r, corrupted});
    if (!was_busy) became_busy.push_back(r);
  }
  const SimTime end = head.tx_end;
  active_.emplace(tx_id, std::move(tx));
  for (NodeId r : became_busy) on_busy_onset(r);
  scheduler_.schedule(end, EventKind::FrameArrival, node, [this, tx_id] { finish(tx_id); });
}

void Channel::finish(std::uint64_t tx_id) {
  auto node_it = active_.find(tx_id);
  if (node_it == active_.end()) throw ModelError("unknown transmission finished");
  Transmission tx = std::move(node_it->second);
  active_.erase(node_it);

  const NodeId sender = tx.frame.src;
  Mac& mac = macs_[sender];
  mac.transmitting = false;

  std::vector<NodeId> now_idle;
  std::vector<NodeId> decoded;
  bool acked = false;
  for (const Receiver& r : tx.receivers) {
    Mac& rx = macs_[r.node];
    auto it = std::find_if(rx.incoming.begin(), rx.incoming.end(),
                           [&](const Incoming& in) { return in.tx_id == tx_id; });
    if (it == rx.incoming.end()) throw ModelError("receiver lost track of an incoming frame");
    rx.incoming.erase(it);
    if (!busy(r.node)) now_idle.push_back(r.node);
    if (r.corrupted) {
      ++stats_.corrupted_receptions;
      continue;
    }
    if (tx.frame.dst == kBroadcast) {
      ++stats_.broadcast_receptions;
      decoded.push_back(r.node);
    } else if (tx.frame.dst == r.node) {
      ++stats_.unicast_delivered;
      acked = true;
      decoded.push_back(r.node);
    }
  }

  // Sender side: completion, retry, or give up.
  Frame done = std::move(mac.queue.front());
  mac.queue.pop_front();
  mac.phase = Phase::Idle;
  bool link_break = false;
  if (done.dst == kBroadcast || acked) {
    mac.cw = params_.cw_min;
    mac.retries = 0;
  } else if (mac.retries >= params_.retry_limit) {
    mac.cw = params_.cw_min;
    mac.retries = 0;
    ++stats_.retry_drops;
    link_break = true;
  } else {
    ++mac.retries;
    mac.cw = std::min(2 * mac.cw + 1, params_.cw_max);
    done.retry_count = mac.retries;
    mac.queue.push_front(done);
  }
  if (hooks_.on_tx_done) hooks_.on_tx_done(sender, tx.frame, acked || done.dst == kBroadcast);

  for (NodeId r : decoded) {
    if (hooks_.on_receive) hooks_.on_receive(r, tx.frame);
  }
  if (link_break && hooks_.on_link_break) hooks_.on_link_break(sender, done);

  for (NodeId r : now_idle) on_idle(r);
  if (mac.phase == Phase::Idle && !mac.queue.empty()) start_access(sender);
}

}  // namespace wsn::phy
