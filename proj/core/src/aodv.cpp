#include "wsn/routing/aodv.hpp"

#include <algorithm>
#include <memory>

#include "wsn/error.hpp"

namespace wsn::routing {

using phy::FrameKind;
using phy::kBroadcast;
using sim::EventKind;

const char* to_string(DropReason reason) {
  switch (reason) {
    case DropReason::NoRoute: return "no-route";
    case DropReason::BufferOverflow: return "buffer-overflow";
    case DropReason::LinkBreak: return "link-break";
    case DropReason::TtlExpired: return "ttl-expired";
    case DropReason::QueueFull: return "queue-full";
    case DropReason::ReplyLost: return "reply-lost";
  }
  return "unknown";
}

// ---------------------------------------------------------------- RouteTable

std::optional<NodeId> RouteTable::lookup(NodeId dest, SimTime now) const {
  auto it = entries_.find(dest);
  if (it == entries_.end() || !it->second.usable(now)) return std::nullopt;
  return it->second.next_hop;
}

RouteEntry* RouteTable::find(NodeId dest) {
  auto it = entries_.find(dest);
  return it == entries_.end() ? nullptr : &it->second;
}

const RouteEntry* RouteTable::find(NodeId dest) const {
  auto it = entries_.find(dest);
  return it == entries_.end() ? nullptr : &it->second;
}

bool RouteTable::offer(NodeId dest, NodeId next_hop, std::uint32_t hop_count,
                       std::uint32_t dest_seq, bool seq_known, SimTime expires_at, SimTime now) {
  if (hop_count == 0) throw ModelError("route offer with zero hop count");
  auto [it, inserted] = entries_.try_emplace(dest);
  RouteEntry& e = it->second;
  bool take = inserted;
  if (!take) {
    if (!seq_known) {
      take = !e.usable(now);
    } else if (!e.seq_known) {
      take = true;
    } else {
      // Wrapping comparison of sequence numbers.
      const auto delta = static_cast<std::int32_t>(dest_seq - e.dest_seq);
      take = delta > 0 || (delta == 0 && (hop_count < e.hop_count || !e.usable(now)));
    }
  }
  if (!take) {
    // Same route re-offered: extend its lifetime.
    if (e.next_hop == next_hop && e.hop_count == hop_count) e.expires_at = std::max(e.expires_at, expires_at);
    return false;
  }
  const bool same_path = !inserted && e.next_hop == next_hop;
  e.dest = dest;
  e.next_hop = next_hop;
  e.hop_count = hop_count;
  if (seq_known) {
    e.dest_seq = dest_seq;
    e.seq_known = true;
  }
  e.expires_at = expires_at;
  e.valid = true;
  if (!same_path) e.precursors.clear();
  return true;
}

void RouteTable::refresh(NodeId dest, SimTime now, SimTime expires_at) {
  auto it = entries_.find(dest);
  if (it != entries_.end() && it->second.usable(now)) {
    it->second.expires_at = std::max(it->second.expires_at, expires_at);
  }
}

std::vector<NodeId> RouteTable::invalidate_via(NodeId next_hop) {
  std::vector<NodeId> out;
  for (auto& [dest, e] : entries_) {
    if (e.valid && e.next_hop == next_hop) {
      e.valid = false;
      ++e.dest_seq;
      out.push_back(dest);
    }
  }
  return out;
}

// -------------------------------------------------------------------- Router

Router::Router(sim::Scheduler& scheduler, phy::Channel& channel, sim::RngStream& jitter_rng,
               RoutingParams params, std::size_t node_count)
    : scheduler_(scheduler), channel_(channel), rng_(jitter_rng), params_(params), nodes_(node_count) {}

std::optional<NodeId> Router::route_lookup(NodeId node, NodeId dest) const {
  if (node == dest) throw ModelError("route lookup toward self");
  return nodes_[node].table.lookup(dest, scheduler_.now());
}

bool Router::discovery_pending(NodeId origin, NodeId dest) const {
  return nodes_[origin].discoveries.contains(dest);
}

std::size_t Router::buffered(NodeId origin, NodeId dest) const {
  auto it = nodes_[origin].discoveries.find(dest);
  return it == nodes_[origin].discoveries.end() ? 0 : it->second.buffer.size();
}

void Router::drop(NodeId node, const net::Packet& packet, DropReason reason) {
  if (hooks_.on_drop) hooks_.on_drop(node, packet, reason);
}

void Router::send(net::Packet packet) {
  const NodeId origin = packet.src;
  if (packet.dst == origin) throw ModelError("data packet addressed to its own origin");
  packet.uid = next_uid_++;
  if (auto next = route_lookup(origin, packet.dst)) {
    forward_data(origin, std::move(packet), *next, std::nullopt);
    return;
  }
  const NodeId dest = packet.dst;
  NodeState& st = nodes_[origin];
  auto [it, fresh] = st.discoveries.try_emplace(dest);
  Discovery& d = it->second;
  if (d.buffer.size() >= params_.pending_limit) {
    net::Packet oldest = std::move(d.buffer.front());
    d.buffer.pop_front();
    drop(origin, oldest, DropReason::BufferOverflow);
  }
  d.buffer.push_back(std::move(packet));
  if (fresh) initiate_discovery(origin, dest);
}

void Router::initiate_discovery(NodeId origin, NodeId dest) {
  ++stats_.discoveries;
  Discovery& d = nodes_[origin].discoveries.at(dest);
  d.attempts = 0;
  send_rreq(origin, dest);
}

void Router::send_rreq(NodeId origin, NodeId dest) {
  NodeState& st = nodes_[origin];
  Discovery& d = st.discoveries.at(dest);
  ++d.attempts;

  net::Rreq rreq;
  rreq.origin = origin;
  rreq.origin_seq = ++st.own_seq;
  rreq.rreq_id = ++st.next_rreq_id;
  rreq.dest = dest;
  if (const RouteEntry* e = st.table.find(dest); e && e->seq_known) {
    rreq.dest_seq = e->dest_seq;
    rreq.dest_seq_known = true;
  }
  rreq.hop_count = 0;
  st.seen_rreqs.insert(rreq_key(origin, rreq.rreq_id));

  net::Packet p;
  p.src = origin;
  p.dst = kBroadcast;
  p.body = rreq;
  send_ctl(origin, kBroadcast, std::move(p));
  ++stats_.rreq_sent;

  // Timeout doubles with each attempt: 1 s, 2 s, 4 s by default.
  const SimTime wait = params_.discovery_timeout * (std::int64_t{1} << (d.attempts - 1));
  d.timer = scheduler_.schedule_in(wait, EventKind::TimerExpiry, origin,
                                   [this, origin, dest] { on_discovery_timeout(origin, dest); });
}

void Router::on_discovery_timeout(NodeId origin, NodeId dest) {
  NodeState& st = nodes_[origin];
  auto it = st.discoveries.find(dest);
  if (it == st.discoveries.end()) return;
  if (it->second.attempts < 1 + params_.discovery_retries) {
    send_rreq(origin, dest);
    return;
  }
  ++stats_.discovery_failures;
  std::deque<net::Packet> dropped = std::move(it->second.buffer);
  st.discoveries.erase(it);
  for (const net::Packet& p : dropped) drop(origin, p, DropReason::NoRoute);
}

void Router::send_ctl(NodeId node, NodeId next_hop, net::Packet packet) {
  if (packet.uid == 0) packet.uid = next_uid_++;
  auto ptr = std::make_shared<const net::Packet>(std::move(packet));
  channel_.enqueue(node, FrameKind::RoutingCtl, next_hop, std::move(ptr));
}

void Router::touch_neighbor(NodeId node, NodeId neighbor) {
  const SimTime now = scheduler_.now();
  nodes_[node].table.offer(neighbor, neighbor, 1, 0, false, now + params_.route_lifetime, now);
}

void Router::forward_data(NodeId node, net::Packet packet, NodeId next_hop,
                          std::optional<NodeId> prev_hop) {
  const SimTime now = scheduler_.now();
  const SimTime until = now + params_.route_lifetime;
  RouteTable& table = nodes_[node].table;
  table.refresh(packet.dst, now, until);
  table.refresh(next_hop, now, until);
  if (prev_hop) {
    table.refresh(packet.src, now, until);
    table.refresh(*prev_hop, now, until);
    if (RouteEntry* e = table.find(packet.dst)) e->precursors.insert(*prev_hop);
  }
  auto ptr = std::make_shared<const net::Packet>(std::move(packet));
  if (!channel_.enqueue(node, FrameKind::Data, next_hop, ptr)) drop(node, *ptr, DropReason::QueueFull);
}

void Router::receive(NodeId node, const phy::Frame& frame) {
  const net::Packet& packet = *frame.packet;
  const NodeId prev = frame.src;
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, tcp::Segment>) {
          handle_data(node, prev, packet);
        } else if constexpr (std::is_same_v<T, net::Rreq>) {
          handle_rreq(node, prev, body);
        } else if constexpr (std::is_same_v<T, net::Rrep>) {
          handle_rrep(node, prev, body);
        } else {
          handle_rerr(node, prev, body);
        }
      },
      packet.body);
}

void Router::handle_data(NodeId node, NodeId prev_hop, const net::Packet& packet) {
  touch_neighbor(node, prev_hop);
  if (packet.dst == node) {
    nodes_[node].table.refresh(packet.src, scheduler_.now(), scheduler_.now() + params_.route_lifetime);
    if (hooks_.on_deliver) hooks_.on_deliver(node, packet);
    return;
  }
  if (packet.ttl <= 1) {
    drop(node, packet, DropReason::TtlExpired);
    return;
  }
  net::Packet fwd = packet;
  --fwd.ttl;
  if (auto next = route_lookup(node, packet.dst)) {
    forward_data(node, std::move(fwd), *next, prev_hop);
    return;
  }
  drop(node, packet, DropReason::NoRoute);
  const RouteEntry* e = nodes_[node].table.find(packet.dst);
  net::Rerr rerr;
  rerr.unreachable.emplace_back(packet.dst, e ? e->dest_seq : 0);
  net::Packet p;
  p.src = node;
  p.dst = prev_hop;
  p.body = std::move(rerr);
  send_ctl(node, prev_hop, std::move(p));
  ++stats_.rerr_sent;
}

void Router::handle_rreq(NodeId node, NodeId prev_hop, const net::Rreq& rreq) {
  NodeState& st = nodes_[node];
  if (!st.seen_rreqs.insert(rreq_key(rreq.origin, rreq.rreq_id)).second) {
    ++stats_.rreq_duplicates;
    return;
  }
  const SimTime now = scheduler_.now();
  const SimTime until = now + params_.route_lifetime;
  touch_neighbor(node, prev_hop);
  st.table.offer(rreq.origin, prev_hop, rreq.hop_count + 1, rreq.origin_seq, true, until, now);

  if (node == rreq.dest) {
    st.own_seq = std::max(st.own_seq, rreq.dest_seq_known ? rreq.dest_seq : 0u) + 1;
    net::Rrep rrep{rreq.origin, node, st.own_seq, 0};
    net::Packet p;
    p.src = node;
    p.dst = prev_hop;
    p.body = rrep;
    send_ctl(node, prev_hop, std::move(p));
    ++stats_.rrep_sent;
    return;
  }

  if (RouteEntry* e = st.table.find(rreq.dest);
      e && e->usable(now) && e->seq_known &&
      (!rreq.dest_seq_known || static_cast<std::int32_t>(e->dest_seq - rreq.dest_seq) >= 0) &&
      e->next_hop != prev_hop) {
    // Intermediate reply from a fresh-enough cached route.
    e->precursors.insert(prev_hop);
    if (RouteEntry* back = st.table.find(rreq.origin)) back->precursors.insert(e->next_hop);
    net::Rrep rrep{rreq.origin, rreq.dest, e->dest_seq, e->hop_count};
    net::Packet p;
    p.src = node;
    p.dst = prev_hop;
    p.body = rrep;
    send_ctl(node, prev_hop, std::move(p));
    ++stats_.rrep_sent;
    return;
  }

  if (rreq.hop_count + 1 >= params_.net_diameter) return;
  net::Rreq fwd = rreq;
  fwd.hop_count = rreq.hop_count + 1;
  const SimTime jitter = SimTime::from_seconds(rng_.uniform(0.0, params_.rreq_jitter_s));
  scheduler_.schedule_in(jitter, EventKind::TimerExpiry, node, [this, node, fwd] {
    net::Packet p;
    p.src = node;
    p.dst = kBroadcast;
    p.body = fwd;
    send_ctl(node, kBroadcast, std::move(p));
    ++stats_.rreq_sent;
  });
}

void Router::handle_rrep(NodeId node, NodeId prev_hop, const net::Rrep& rrep) {
  NodeState& st = nodes_[node];
  const SimTime now = scheduler_.now();
  const SimTime until = now + params_.route_lifetime;
  touch_neighbor(node, prev_hop);
  st.table.offer(rrep.dest, prev_hop, rrep.hop_count + 1, rrep.dest_seq, true, until, now);

  if (node == rrep.origin) {
    auto it = st.discoveries.find(rrep.dest);
    if (it == st.discoveries.end()) return;  // late reply to a finished discovery
    auto next = st.table.lookup(rrep.dest, now);
    if (!next) return;
    scheduler_.cancel(it->second.timer);
    std::deque<net::Packet> queued = std::move(it->second.buffer);
    st.discoveries.erase(it);
    for (net::Packet& p : queued) forward_data(node, std::move(p), *next, std::nullopt);
    return;
  }

  auto toward_origin = st.table.lookup(rrep.origin, now);
  if (!toward_origin) {
    net::Packet lost;
    lost.src = node;
    lost.dst = rrep.origin;
    lost.body = rrep;
    drop(node, lost, DropReason::ReplyLost);
    return;
  }
  if (RouteEntry* e = st.table.find(rrep.dest)) e->precursors.insert(*toward_origin);
  if (RouteEntry* back = st.table.find(rrep.origin)) back->precursors.insert(prev_hop);
  st.table.refresh(rrep.origin, now, until);
  net::Rrep fwd = rrep;
  fwd.hop_count = rrep.hop_count + 1;
  net::Packet p;
  p.src = node;
  p.dst = *toward_origin;
  p.body = fwd;
  send_ctl(node, *toward_origin, std::move(p));
  ++stats_.rrep_sent;
}

void Router::handle_rerr(NodeId node, NodeId prev_hop, const net::Rerr& rerr) {
  RouteTable& table = nodes_[node].table;
  std::vector<NodeId> lost;
  std::set<NodeId> notify;
  for (const auto& [dest, seq] : rerr.unreachable) {
    RouteEntry* e = table.find(dest);
    if (!e || !e->valid || e->next_hop != prev_hop) continue;
    e->valid = false;
    e->dest_seq = std::max(e->dest_seq, seq);
    lost.push_back(dest);
    notify.insert(e->precursors.begin(), e->precursors.end());
  }
  if (!lost.empty() && !notify.empty()) send_rerr(node, lost, notify);
}

void Router::send_rerr(NodeId node, const std::vector<NodeId>& dests, const std::set<NodeId>& receivers) {
  const RouteTable& table = nodes_[node].table;
  net::Rerr rerr;
  for (NodeId d : dests) {
    const RouteEntry* e = table.find(d);
    rerr.unreachable.emplace_back(d, e ? e->dest_seq : 0);
  }
  for (NodeId r : receivers) {
    if (r == node) continue;
    net::Packet p;
    p.src = node;
    p.dst = r;
    p.body = rerr;
    send_ctl(node, r, std::move(p));
    ++stats_.rerr_sent;
  }
}

void Router::link_break(NodeId node, const phy::Frame& frame) {
  ++stats_.link_breaks;
  const NodeId broken = frame.dst;
  RouteTable& table = nodes_[node].table;
  std::set<NodeId> notify;
  for (const auto& [dest, e] : table.entries()) {
    if (e.valid && e.next_hop == broken) notify.insert(e.precursors.begin(), e.precursors.end());
  }
  const std::vector<NodeId> lost = table.invalidate_via(broken);

  drop(node, *frame.packet, DropReason::LinkBreak);
  for (const phy::Frame& f : channel_.purge(node, broken)) drop(node, *f.packet, DropReason::LinkBreak);
  if (!lost.empty() && !notify.empty()) send_rerr(node, lost, notify);
}

}  // namespace wsn::routing
