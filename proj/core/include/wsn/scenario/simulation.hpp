#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsn/app/message.hpp"
#include "wsn/metrics/collector.hpp"
#include "wsn/metrics/record.hpp"
#include "wsn/phy/channel.hpp"
#include "wsn/routing/aodv.hpp"
#include "wsn/scenario/config.hpp"
#include "wsn/scenario/topology.hpp"
#include "wsn/tcp/sender.hpp"

namespace wsn::scenario {

struct RunOptions {
  // Keep every message that reached the sink (with its per-leg timestamps).
  bool keep_messages = false;
  // Record the congestion trajectory of the connection originating at this node.
  std::optional<phy::NodeId> trace_node;
};

// Counters that explain a result; all deterministic.
struct Diagnostics {
  std::uint32_t placement_attempts = 0;
  std::uint64_t events = 0;
  std::uint32_t sensors = 0;
  std::uint32_t connections = 0;
  std::uint64_t blocked_ticks = 0;        // reporting ticks skipped on a full/unopened connection
  std::uint64_t lost_on_reset = 0;        // messages discarded by connection resets
  std::uint64_t cross_section_drops = 0;  // must stay zero
  std::uint64_t relayed = 0;              // messages re-originated by proxies
  std::uint64_t queued_at_end = 0;        // messages still buffered at proxies
  tcp::SenderStats tcp;                   // summed over connections
  phy::MacStats mac;
  routing::RoutingStats routing;
  std::map<std::string, std::uint64_t> packet_drops;  // by drop reason
};

struct RunResult {
  metrics::MetricsRecord record;
  metrics::Summary summary;
  Diagnostics diagnostics;
  std::uint64_t dispatch_hash = 0;  // FNV-1a over the (time, seq, target, kind) dispatch log
  Topology topology;
  std::vector<app::Message> messages;  // with RunOptions::keep_messages
  std::vector<tcp::TracePoint> trace;  // with RunOptions::trace_node
};

// Builds the topology, wires mobility, MAC, routing, transport and the
// applications, runs to duration_s and closes the measurement window.
// A pure function of the configuration (seed included). Errors raised by any
// module are re-thrown with the scenario id and seed prepended.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

}  // namespace wsn::scenario
