#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wsn/net/packet.hpp"
#include "wsn/phy/channel.hpp"
#include "wsn/sim/rng.hpp"
#include "wsn/sim/scheduler.hpp"

namespace wsn::routing {

using net::NodeId;
using sim::SimTime;

struct RoutingParams {
  SimTime route_lifetime = SimTime::from_seconds(10.0);
  SimTime discovery_timeout = SimTime::from_seconds(1.0);
  std::uint32_t discovery_retries = 2;
  std::size_t pending_limit = 64;
  double rreq_jitter_s = 0.010;
  std::uint32_t net_diameter = 35;
};

struct RouteEntry {
  NodeId dest = 0;
  NodeId next_hop = 0;
  std::uint32_t hop_count = 0;
  std::uint32_t dest_seq = 0;
  bool seq_known = false;
  SimTime expires_at;
  bool valid = false;
  std::set<NodeId> precursors;

  bool usable(SimTime now) const { return valid && now < expires_at; }
};

// Per-node routing table with the AODV freshness rule.
class RouteTable {
 public:
  // Next hop of an unexpired valid entry, or nullopt.
  std::optional<NodeId> lookup(NodeId dest, SimTime now) const;

  RouteEntry* find(NodeId dest);
  const RouteEntry* find(NodeId dest) const;

  // Installs or replaces the entry when the offer is fresher (higher seq,
  // equal seq with fewer hops, or the existing entry is invalid/expired/seq
  // unknown). Returns true when the entry now reflects the offer.
  bool offer(NodeId dest, NodeId next_hop, std::uint32_t hop_count, std::uint32_t dest_seq,
             bool seq_known, SimTime expires_at, SimTime now);

  // Extends the lifetime of a currently usable entry.
  void refresh(NodeId dest, SimTime now, SimTime expires_at);

  // Invalidates every valid entry whose next hop is `next_hop`; returns the
  // affected destinations in ascending order.
  std::vector<NodeId> invalidate_via(NodeId next_hop);

  const std::map<NodeId, RouteEntry>& entries() const { return entries_; }

 private:
  std::map<NodeId, RouteEntry> entries_;
};

enum class DropReason : std::uint8_t {
  NoRoute,          // discovery exhausted or intermediate without a route
  BufferOverflow,   // pending-packet buffer full, oldest evicted
  LinkBreak,        // MAC retry exhaustion or queue purge after one
  TtlExpired,
  QueueFull,        // interface queue overflow
  ReplyLost,        // RREP with no reverse route
};

const char* to_string(DropReason reason);

struct RoutingStats {
  std::uint64_t rreq_sent = 0;
  std::uint64_t rreq_duplicates = 0;
  std::uint64_t rrep_sent = 0;
  std::uint64_t rerr_sent = 0;
  std::uint64_t discoveries = 0;
  std::uint64_t discovery_failures = 0;
  std::uint64_t link_breaks = 0;
};

// Simplified AODV for every node of one simulation: on-demand discovery via
// flooded RREQ with duplicate suppression, RREP along the reverse path, and
// RERR to precursors when the MAC reports a broken link. No HELLO beacons,
// no local repair, no gratuitous RREP.
class Router {
 public:
  struct Hooks {
    std::function<void(NodeId node, const net::Packet&)> on_deliver;
    std::function<void(NodeId node, const net::Packet&, DropReason)> on_drop;
  };

  Router(sim::Scheduler& scheduler, phy::Channel& channel, sim::RngStream& jitter_rng,
         RoutingParams params, std::size_t node_count);

  void set_hooks(Hooks hooks) { hooks_ = std::move(hooks); }

  // Originates a data packet at packet.src.
  void send(net::Packet packet);

  // MAC upcalls.
  void receive(NodeId node, const phy::Frame& frame);
  void link_break(NodeId node, const phy::Frame& frame);

  std::optional<NodeId> route_lookup(NodeId node, NodeId dest) const;
  RouteTable& table(NodeId node) { return nodes_[node].table; }
  const RouteTable& table(NodeId node) const { return nodes_[node].table; }
  bool discovery_pending(NodeId origin, NodeId dest) const;
  std::size_t buffered(NodeId origin, NodeId dest) const;

  const RoutingStats& stats() const { return stats_; }
  const RoutingParams& params() const { return params_; }

 private:
  struct Discovery {
    std::uint32_t attempts = 0;
    sim::EventHandle timer;
    std::deque<net::Packet> buffer;
  };

  struct NodeState {
    RouteTable table;
    std::uint32_t own_seq = 0;
    std::uint32_t next_rreq_id = 0;
    std::unordered_set<std::uint64_t> seen_rreqs;
    std::map<NodeId, Discovery> discoveries;
  };

  void initiate_discovery(NodeId origin, NodeId dest);
  void send_rreq(NodeId origin, NodeId dest);
  void on_discovery_timeout(NodeId origin, NodeId dest);
  void forward_data(NodeId node, net::Packet packet, NodeId next_hop, std::optional<NodeId> prev_hop);
  void handle_data(NodeId node, NodeId prev_hop, const net::Packet& packet);
  void handle_rreq(NodeId node, NodeId prev_hop, const net::Rreq& rreq);
  void handle_rrep(NodeId node, NodeId prev_hop, const net::Rrep& rrep);
  void handle_rerr(NodeId node, NodeId prev_hop, const net::Rerr& rerr);
  void send_rerr(NodeId node, const std::vector<NodeId>& dests, const std::set<NodeId>& receivers);
  void send_ctl(NodeId node, NodeId next_hop, net::Packet packet);
  void drop(NodeId node, const net::Packet& packet, DropReason reason);
  void touch_neighbor(NodeId node, NodeId neighbor);
  static std::uint64_t rreq_key(NodeId origin, std::uint32_t id) {
    return (static_cast<std::uint64_t>(origin) << 32) | id;
  }

  sim::Scheduler& scheduler_;
  phy::Channel& channel_;
  sim::RngStream& rng_;
  RoutingParams params_;
  Hooks hooks_;
  std::vector<NodeState> nodes_;
  std::uint64_t next_uid_ = 1;
  RoutingStats stats_;
};

}  // namespace wsn::routing
