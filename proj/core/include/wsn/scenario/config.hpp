#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsn/app/proxy.hpp"
#include "wsn/app/sections.hpp"
#include "wsn/app/sensor.hpp"
#include "wsn/phy/channel.hpp"
#include "wsn/phy/mobility.hpp"
#include "wsn/routing/aodv.hpp"
#include "wsn/tcp/sender.hpp"

namespace wsn::scenario {

// Low / Medium / High sensing traffic: one message every 4 / 2 / 1 s.
enum class TrafficState : std::uint8_t { Low, Medium, High };

const char* to_string(TrafficState s);
std::optional<TrafficState> parse_traffic_state(std::string_view text);
double reporting_interval_s(TrafficState s);

// Every tunable of one simulation run. Defaults are the reference setup:
// 1000 m square field, 100 m radio range, 4 proxies, 200 s runs with a
// 20 s warm-up.
struct ScenarioConfig {
  // Field and population.
  double area_side = 1000.0;
  std::uint32_t node_count = 50;
  app::ProxyMode proxy_mode = app::ProxyMode::None;
  std::uint32_t proxy_count = 4;
  double radio_range = 100.0;

  // Run.
  tcp::Variant variant = tcp::Variant::Tcp;
  std::uint64_t seed = 1;
  double duration_s = 200.0;
  double warmup_s = 20.0;

  // Application.
  TrafficState traffic_state = TrafficState::Medium;
  std::uint32_t message_size = 512;
  std::uint64_t send_buffer_bytes = 2048;
  std::uint64_t proxy_send_buffer_bytes = 8192;
  double batch_interval_s = 1.0;
  std::uint64_t batch_bytes = 4096;

  // Mobility.
  double speed_min = 1.0;
  double speed_max = 5.0;
  double pause_s = 2.0;
  double mobility_step_s = 0.1;

  // MAC.
  double data_rate_bps = 2e6;
  std::uint32_t difs_us = 50;
  std::uint32_t slot_us = 20;
  std::uint32_t cw_min = 31;
  std::uint32_t cw_max = 1023;
  std::uint32_t retry_limit = 7;
  std::uint32_t frame_overhead_bytes = 58;
  std::uint32_t ifq_limit = 50;

  // Routing.
  double route_lifetime_s = 10.0;
  double discovery_timeout_s = 1.0;
  std::uint32_t discovery_retries = 2;
  std::uint32_t pending_limit = 64;
  double rreq_jitter_s = 0.010;
  std::uint32_t net_diameter = 35;

  // Transport.
  std::uint32_t segment_size = 512;
  std::uint32_t rwnd_segments = 64;
  double rto_min_s = 0.2;
  double rto_max_s = 60.0;
  double rto_initial_s = 1.0;
  double vegas_alpha = 1.0;
  double vegas_beta = 3.0;
  double vegas_gamma = 1.0;
  double vegas_loss_factor = 0.75;
  std::uint32_t max_consecutive_timeouts = 12;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

  // Throws ConfigError naming the offending key.
  void validate() const;

  // Identifies the configuration (without the seed) in result tables.
  std::string scenario_id() const;

  phy::MacParams mac_params() const;
  phy::MobilityParams mobility_params() const;
  routing::RoutingParams routing_params() const;
  tcp::TcpParams tcp_params() const;
  app::TrafficParams traffic_params() const;
  app::BatchParams batch_params() const;
};

// All recognised keys, in serialisation order.
const std::vector<std::string>& config_keys();

// Sets one key from its textual value; throws ConfigError on an unknown key
// or malformed value (message names the key).
void set_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const ScenarioConfig& cfg, std::string_view key);

// Flat `key=value` format: one pair per line, '#' starts a comment, blank
// lines ignored, LF or CRLF line ends. Unknown keys, malformed values and
// violated invariants are reported with the key and line number. Missing
// keys keep their defaults.
ScenarioConfig parse_config(std::string_view text, const std::string& origin = "<config>");
ScenarioConfig load_config(const std::string& path);

// Every key, one per line, in a form parse_config reads back to an equal
// configuration.
std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace wsn::scenario
