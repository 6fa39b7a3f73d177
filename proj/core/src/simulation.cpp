#include "wsn/scenario/simulation.hpp"

#include <deque>
#include <memory>
#include <utility>

#include "wsn/app/proxy.hpp"
#include "wsn/app/sensor.hpp"
#include "wsn/error.hpp"
#include "wsn/phy/mobility.hpp"
#include "wsn/sim/rng.hpp"
#include "wsn/sim/scheduler.hpp"
#include "wsn/tcp/connection.hpp"

namespace wsn::scenario {

namespace {

using app::Message;
using phy::NodeId;
using sim::SimTime;
using sim::StreamId;

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= kFnvPrime;
  }
}

void add_stats(tcp::SenderStats& into, const tcp::SenderStats& s) {
  into.segments_sent += s.segments_sent;
  into.retransmits += s.retransmits;
  into.fast_retransmits += s.fast_retransmits;
  into.fast_recovery_entries += s.fast_recovery_entries;
  into.early_retransmits += s.early_retransmits;
  into.timeouts += s.timeouts;
  into.resets += s.resets;
}

// One fully wired simulation instance. Members are declared in dependency
// order so that everything holding a reference is destroyed first.
class World {
 public:
  World(const ScenarioConfig& cfg, const RunOptions& options)
      : cfg_(cfg),
        options_(options),
        placement_rng_(cfg.seed, StreamId::Placement),
        mobility_rng_(cfg.seed, StreamId::Mobility),
        backoff_rng_(cfg.seed, StreamId::MacBackoff),
        traffic_rng_(cfg.seed, StreamId::Traffic),
        routing_rng_(cfg.seed, StreamId::Routing),
        topology_(generate_topology(cfg, placement_rng_)),
        nodes_(make_nodes()),
        waypoint_(cfg.mobility_params()),
        channel_(scheduler_, nodes_, cfg.mac_params(), backoff_rng_),
        router_(scheduler_, channel_, routing_rng_, cfg.routing_params(), nodes_.size()),
        collector_(SimTime::from_seconds(cfg.warmup_s), SimTime::from_seconds(cfg.duration_s)) {
    scheduler_.set_observer([this](const sim::DispatchRecord& r) {
      fnv_mix(hash_, static_cast<std::uint64_t>(r.fire_at.ns()));
      fnv_mix(hash_, r.seq);
      fnv_mix(hash_, r.target);
      fnv_mix(hash_, static_cast<std::uint64_t>(r.kind));
    });
    wire_lower_layers();
    for (NodeState& n : nodes_) waypoint_.start(n, mobility_rng_);
    build_applications();
    schedule_mobility(1);
  }

  RunResult run() {
    scheduler_.run_until(SimTime::from_seconds(cfg_.duration_s));
    return finish();
  }

 private:
  using NodeState = phy::NodeState;

  std::vector<NodeState> make_nodes() const {
    std::vector<NodeState> nodes(cfg_.node_count);
    for (NodeId i = 0; i < cfg_.node_count; ++i) {
      nodes[i].id = i;
      nodes[i].position = topology_.positions[i];
      nodes[i].section = topology_.sections.section_of[i];
    }
    nodes[kSink].role = phy::Role::Sink;
    nodes[kSink].mobile = false;
    // Proxies are chosen by their t=0 position but keep moving like any
    // other sensor; only the sink is stationary.
    for (const auto& p : topology_.sections.proxy) {
      if (p) nodes[*p].role = phy::Role::Proxy;
    }
    return nodes;
  }

  void wire_lower_layers() {
    channel_.set_hooks(phy::Channel::Hooks{
        .on_receive = [this](NodeId rx, const phy::Frame& f) { router_.receive(rx, f); },
        .on_link_break = [this](NodeId tx, const phy::Frame& f) { router_.link_break(tx, f); },
        .on_ifq_drop = {},
        .on_attempt = {},
        .on_tx_done = {},
    });
    router_.set_hooks(routing::Router::Hooks{
        .on_deliver =
            [this](NodeId node, const net::Packet& p) {
              const auto* seg = std::get_if<tcp::Segment>(&p.body);
              if (!seg) return;
              if (seg->conn >= connections_.size()) {
                throw ModelError("segment for an unknown connection");
              }
              connections_[seg->conn]->on_arrival(node, *seg);
            },
        .on_drop =
            [this](NodeId, const net::Packet&, routing::DropReason reason) {
              ++drops_[routing::to_string(reason)];
            },
    });
  }

  // Opens a connection src -> dst and returns its id.
  tcp::ConnId add_connection(NodeId src, NodeId dst, std::uint64_t buffer) {
    const auto id = static_cast<tcp::ConnId>(connections_.size());
    connections_.push_back(std::make_unique<tcp::Connection>(id, src, dst, cfg_.variant,
                                                             cfg_.tcp_params(), buffer,
                                                             scheduler_));
    streams_.emplace_back();
    relay_of_conn_.push_back(nullptr);
    tcp::Connection& conn = *connections_.back();
    const bool traced = options_.trace_node && *options_.trace_node == src;
    conn.set_hooks(tcp::Connection::Hooks{
        .transmit =
            [this](NodeId from, NodeId to, const tcp::Segment& s) {
              net::Packet p;
              p.src = from;
              p.dst = to;
              p.body = s;
              router_.send(std::move(p));
            },
        .on_delivered = [this, id](std::uint64_t, std::uint64_t last) { delivered(id, last); },
        .on_writable =
            [this, id] {
              if (relay_of_conn_[id]) relay_of_conn_[id]->on_writable();
            },
        .on_reset = [this, id] { lost_on_reset_ += streams_[id].reset().size(); },
        .on_trace =
            [this, traced](const tcp::TracePoint& p) {
              if (traced) trace_.push_back(p);
            },
    });
    return id;
  }

  void build_applications() {
    const auto& sections = topology_.sections;
    const bool proxied = cfg_.proxy_mode != app::ProxyMode::None;
    const app::TrafficParams traffic = cfg_.traffic_params();
    const double interval_s = traffic.interval.seconds();

    // Sensors in id order: each gets one connection to its destination and
    // a start offset drawn uniformly within one reporting interval.
    for (NodeId n = 0; n < nodes_.size(); ++n) {
      if (nodes_[n].role != phy::Role::Sensor) continue;
      const NodeId dst = proxied ? *sections.proxy[sections.section_of[n]] : kSink;
      const tcp::ConnId id = add_connection(n, dst, cfg_.send_buffer_bytes);
      sensors_.push_back(std::make_unique<app::SensorApp>(
          n, scheduler_, traffic, *connections_[id], streams_[id], next_message_id_,
          [this](const Message& m) { collector_.record_generation(m); }));
      const SimTime offset = SimTime::from_seconds(traffic_rng_.uniform(0.0, interval_s));
      schedule_open(id, offset);
      sensors_.back()->start(offset);
    }

    // Proxies in section order: one outbound connection each to the sink.
    if (proxied) {
      for (int q = 0; q < app::kSectionCount; ++q) {
        const NodeId p = *sections.proxy[q];
        const tcp::ConnId id = add_connection(p, kSink, cfg_.proxy_send_buffer_bytes);
        relays_.push_back(std::make_unique<app::ProxyRelay>(
            p, q, scheduler_, cfg_.batch_params(), *connections_[id], streams_[id],
            [this](NodeId node) { return topology_.sections.section_of[node]; }));
        relay_of_conn_[id] = relays_.back().get();
        relay_at_node_[p] = relays_.back().get();
        schedule_open(id, SimTime::from_seconds(traffic_rng_.uniform(0.0, interval_s)));
      }
    }
  }

  void schedule_open(tcp::ConnId id, SimTime at) {
    scheduler_.schedule(at, sim::EventKind::AppGenerate, id,
                        [this, id] { connections_[id]->open(); });
  }

  void delivered(tcp::ConnId id, std::uint64_t delivered_end) {
    const tcp::Connection& conn = *connections_[id];
    const SimTime now = scheduler_.now();
    for (Message& m : streams_[id].complete(delivered_end)) {
      collector_.record_leg(conn.src(), conn.dst(), m, now);
      if (conn.dst() == kSink) {
        m.delivered_at = now;
        collector_.record_delivery(m, now);
        if (options_.keep_messages) messages_.push_back(std::move(m));
      } else {
        const auto it = relay_at_node_.find(conn.dst());
        if (it == relay_at_node_.end()) throw ModelError("message arrived at a non-proxy node");
        it->second->accept(std::move(m));
      }
    }
  }

  void schedule_mobility(std::int64_t k) {
    const SimTime step = SimTime::from_seconds(cfg_.mobility_step_s);
    const SimTime at = step * k;
    if (at > SimTime::from_seconds(cfg_.duration_s)) return;
    scheduler_.schedule(at, sim::EventKind::MobilityStep, kSink, [this, k, step] {
      const SimTime from = step * (k - 1);
      for (NodeState& n : nodes_) waypoint_.step(n, from, cfg_.mobility_step_s, mobility_rng_);
      schedule_mobility(k + 1);
    });
  }

  RunResult finish() {
    RunResult out;
    out.summary = collector_.summarize();
    auto& r = out.record;
    r.scenario_id = cfg_.scenario_id();
    r.seed = cfg_.seed;
    r.variant = cfg_.variant;
    r.node_count = cfg_.node_count;
    r.proxy_mode = cfg_.proxy_mode;
    r.throughput_kbps = out.summary.throughput_kbps;
    r.mean_delay_ms = out.summary.mean_delay_ms;
    r.pdr = out.summary.pdr;
    r.generated = out.summary.generated;
    r.delivered = out.summary.delivered;

    auto& d = out.diagnostics;
    d.placement_attempts = topology_.attempts;
    d.events = scheduler_.dispatched_count();
    d.sensors = static_cast<std::uint32_t>(sensors_.size());
    d.connections = static_cast<std::uint32_t>(connections_.size());
    for (const auto& s : sensors_) d.blocked_ticks += s->blocked_ticks();
    d.lost_on_reset = lost_on_reset_;
    for (const auto& p : relays_) {
      d.cross_section_drops += p->cross_section_drops();
      d.relayed += p->relayed();
      d.queued_at_end += p->queued();
    }
    for (const auto& c : connections_) add_stats(d.tcp, c->sender().stats());
    d.mac = channel_.stats();
    d.routing = router_.stats();
    d.packet_drops = drops_;

    out.dispatch_hash = hash_;
    out.topology = topology_;
    out.messages = std::move(messages_);
    out.trace = std::move(trace_);
    return out;
  }

  ScenarioConfig cfg_;
  RunOptions options_;
  sim::Scheduler scheduler_;
  sim::RngStream placement_rng_;
  sim::RngStream mobility_rng_;
  sim::RngStream backoff_rng_;
  sim::RngStream traffic_rng_;
  sim::RngStream routing_rng_;
  Topology topology_;
  std::vector<NodeState> nodes_;
  phy::RandomWaypoint waypoint_;
  phy::Channel channel_;
  routing::Router router_;
  metrics::Collector collector_;

  std::vector<std::unique_ptr<tcp::Connection>> connections_;
  std::deque<app::MessageStream> streams_;  // by connection id; deque keeps references stable
  std::vector<app::ProxyRelay*> relay_of_conn_;
  std::map<NodeId, app::ProxyRelay*> relay_at_node_;
  std::vector<std::unique_ptr<app::SensorApp>> sensors_;
  std::vector<std::unique_ptr<app::ProxyRelay>> relays_;

  std::uint64_t next_message_id_ = 0;
  std::uint64_t lost_on_reset_ = 0;
  std::map<std::string, std::uint64_t> drops_;
  std::uint64_t hash_ = kFnvOffset;
  std::vector<Message> messages_;
  std::vector<tcp::TracePoint> trace_;
};

std::string context(const ScenarioConfig& cfg) {
  return cfg.scenario_id() + " seed " + std::to_string(cfg.seed) + ": ";
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  try {
    cfg.validate();
    World world(cfg, options);
    return world.run();
  } catch (const ModelError& e) {
    throw ModelError(context(cfg) + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(context(cfg) + e.what());
  }
}

}  // namespace wsn::scenario
