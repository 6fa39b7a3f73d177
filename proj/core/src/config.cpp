#include "wsn/scenario/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "wsn/error.hpp"

namespace wsn::scenario {

const char* to_string(TrafficState s) {
  switch (s) {
    case TrafficState::Low: return "Low";
    case TrafficState::Medium: return "Medium";
    case TrafficState::High: return "High";
  }
  return "unknown";
}

std::optional<TrafficState> parse_traffic_state(std::string_view text) {
  for (TrafficState s : {TrafficState::Low, TrafficState::Medium, TrafficState::High}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

double reporting_interval_s(TrafficState s) {
  switch (s) {
    case TrafficState::Low: return 4.0;
    case TrafficState::Medium: return 2.0;
    case TrafficState::High: return 1.0;
  }
  return 2.0;
}

namespace {

struct KeyHandler {
  std::string name;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ConfigError("key '" + std::string(key) + "': invalid value '" + std::string(value) +
                    "' (expected " + expected + ")");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
KeyHandler integer_key(std::string name, T ScenarioConfig::*field) {
  return KeyHandler{
      name,
      [name, field](ScenarioConfig& c, std::string_view v) {
        T out{};
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
          bad_value(name, v, "a non-negative integer");
        }
        c.*field = out;
      },
      [field](const ScenarioConfig& c) { return std::to_string(c.*field); }};
}

KeyHandler real_key(std::string name, double ScenarioConfig::*field) {
  return KeyHandler{
      name,
      [name, field](ScenarioConfig& c, std::string_view v) {
        double out{};
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
          bad_value(name, v, "a finite number");
        }
        c.*field = out;
      },
      [field](const ScenarioConfig& c) { return format_double(c.*field); }};
}

template <typename E>
KeyHandler enum_key(std::string name, E ScenarioConfig::*field,
                    std::optional<E> (*parse)(std::string_view), const char* (*show)(E),
                    const char* choices) {
  return KeyHandler{name,
                    [=](ScenarioConfig& c, std::string_view v) {
                      const auto parsed = parse(v);
                      if (!parsed) bad_value(name, v, choices);
                      c.*field = *parsed;
                    },
                    [=](const ScenarioConfig& c) { return std::string(show(c.*field)); }};
}

const std::vector<KeyHandler>& handlers() {
  static const std::vector<KeyHandler> table = {
      real_key("area_side", &ScenarioConfig::area_side),
      integer_key("node_count", &ScenarioConfig::node_count),
      enum_key<app::ProxyMode>("proxy_mode", &ScenarioConfig::proxy_mode, app::parse_proxy_mode,
                               app::to_string, "None, Middle or SinkNeighbor"),
      integer_key("proxy_count", &ScenarioConfig::proxy_count),
      real_key("radio_range", &ScenarioConfig::radio_range),
      enum_key<tcp::Variant>("variant", &ScenarioConfig::variant, tcp::parse_variant,
                             tcp::to_string, "Tcp, Reno, NewReno or Vegas"),
      integer_key("seed", &ScenarioConfig::seed),
      real_key("duration_s", &ScenarioConfig::duration_s),
      real_key("warmup_s", &ScenarioConfig::warmup_s),
      enum_key<TrafficState>("traffic_state", &ScenarioConfig::traffic_state,
                             parse_traffic_state, to_string, "Low, Medium or High"),
      integer_key("message_size", &ScenarioConfig::message_size),
      integer_key("send_buffer_bytes", &ScenarioConfig::send_buffer_bytes),
      integer_key("proxy_send_buffer_bytes", &ScenarioConfig::proxy_send_buffer_bytes),
      real_key("batch_interval_s", &ScenarioConfig::batch_interval_s),
      integer_key("batch_bytes", &ScenarioConfig::batch_bytes),
      real_key("speed_min", &ScenarioConfig::speed_min),
      real_key("speed_max", &ScenarioConfig::speed_max),
      real_key("pause_s", &ScenarioConfig::pause_s),
      real_key("mobility_step_s", &ScenarioConfig::mobility_step_s),
      real_key("data_rate_bps", &ScenarioConfig::data_rate_bps),
      integer_key("difs_us", &ScenarioConfig::difs_us),
      integer_key("slot_us", &ScenarioConfig::slot_us),
      integer_key("cw_min", &ScenarioConfig::cw_min),
      integer_key("cw_max", &ScenarioConfig::cw_max),
      integer_key("retry_limit", &ScenarioConfig::retry_limit),
      integer_key("frame_overhead_bytes", &ScenarioConfig::frame_overhead_bytes),
      integer_key("ifq_limit", &ScenarioConfig::ifq_limit),
      real_key("route_lifetime_s", &ScenarioConfig::route_lifetime_s),
      real_key("discovery_timeout_s", &ScenarioConfig::discovery_timeout_s),
      integer_key("discovery_retries", &ScenarioConfig::discovery_retries),
      integer_key("pending_limit", &ScenarioConfig::pending_limit),
      real_key("rreq_jitter_s", &ScenarioConfig::rreq_jitter_s),
      integer_key("net_diameter", &ScenarioConfig::net_diameter),
      integer_key("segment_size", &ScenarioConfig::segment_size),
      integer_key("rwnd_segments", &ScenarioConfig::rwnd_segments),
      real_key("rto_min_s", &ScenarioConfig::rto_min_s),
      real_key("rto_max_s", &ScenarioConfig::rto_max_s),
      real_key("rto_initial_s", &ScenarioConfig::rto_initial_s),
      real_key("vegas_alpha", &ScenarioConfig::vegas_alpha),
      real_key("vegas_beta", &ScenarioConfig::vegas_beta),
      real_key("vegas_gamma", &ScenarioConfig::vegas_gamma),
      real_key("vegas_loss_factor", &ScenarioConfig::vegas_loss_factor),
      integer_key("max_consecutive_timeouts", &ScenarioConfig::max_consecutive_timeouts),
  };
  return table;
}

const KeyHandler* find_handler(std::string_view key) {
  for (const KeyHandler& h : handlers()) {
    if (h.name == key) return &h;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError("key '" + std::string(key) + "': " + what);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const KeyHandler& h : handlers()) out.push_back(h.name);
    return out;
  }();
  return keys;
}

void set_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  const KeyHandler* h = find_handler(key);
  if (!h) throw ConfigError("unknown key '" + std::string(key) + "'");
  h->set(cfg, value);
}

std::string get_config_value(const ScenarioConfig& cfg, std::string_view key) {
  const KeyHandler* h = find_handler(key);
  if (!h) throw ConfigError("unknown key '" + std::string(key) + "'");
  return h->get(cfg);
}

void ScenarioConfig::validate() const {
  require(area_side > 0, "area_side", "must be positive");
  require(proxy_count == static_cast<std::uint32_t>(app::kSectionCount), "proxy_count",
          "is fixed at " + std::to_string(app::kSectionCount) + " (one per quadrant)");
  require(node_count >= proxy_count + 1, "node_count",
          "must be at least proxy_count + 1 (" + std::to_string(proxy_count + 1) + ")");
  require(radio_range > 0, "radio_range", "must be positive");
  require(warmup_s >= 0, "warmup_s", "must be non-negative");
  require(duration_s > warmup_s, "duration_s", "must exceed warmup_s");
  require(message_size > 0, "message_size", "must be positive");
  require(send_buffer_bytes >= message_size, "send_buffer_bytes", "must hold one message");
  require(proxy_send_buffer_bytes >= message_size, "proxy_send_buffer_bytes",
          "must hold one message");
  require(batch_interval_s > 0, "batch_interval_s", "must be positive");
  require(batch_bytes > 0, "batch_bytes", "must be positive");
  require(speed_min > 0, "speed_min", "must be positive");
  require(speed_max >= speed_min, "speed_max", "must be at least speed_min");
  require(pause_s >= 0, "pause_s", "must be non-negative");
  require(mobility_step_s > 0, "mobility_step_s", "must be positive");
  require(data_rate_bps > 0, "data_rate_bps", "must be positive");
  require(cw_max >= cw_min, "cw_max", "must be at least cw_min");
  require(ifq_limit > 0, "ifq_limit", "must be positive");
  require(route_lifetime_s > 0, "route_lifetime_s", "must be positive");
  require(discovery_timeout_s > 0, "discovery_timeout_s", "must be positive");
  require(pending_limit > 0, "pending_limit", "must be positive");
  require(rreq_jitter_s >= 0, "rreq_jitter_s", "must be non-negative");
  require(net_diameter > 0, "net_diameter", "must be positive");
  require(segment_size > 0, "segment_size", "must be positive");
  require(rwnd_segments > 0, "rwnd_segments", "must be positive");
  require(rto_min_s > 0, "rto_min_s", "must be positive");
  require(rto_max_s >= rto_min_s, "rto_max_s", "must be at least rto_min_s");
  require(rto_initial_s >= rto_min_s && rto_initial_s <= rto_max_s, "rto_initial_s",
          "must lie within [rto_min_s, rto_max_s]");
  require(vegas_alpha <= vegas_beta, "vegas_alpha", "must not exceed vegas_beta");
  require(vegas_loss_factor > 0 && vegas_loss_factor < 1, "vegas_loss_factor",
          "must lie in (0, 1)");
  require(max_consecutive_timeouts > 0, "max_consecutive_timeouts", "must be positive");
}

std::string ScenarioConfig::scenario_id() const {
  return std::string(tcp::to_string(variant)) + "-n" + std::to_string(node_count) + "-" +
         app::to_string(proxy_mode) + "-" + to_string(traffic_state);
}

phy::MacParams ScenarioConfig::mac_params() const {
  phy::MacParams p;
  p.data_rate_bps = data_rate_bps;
  p.difs = sim::SimTime::from_us(difs_us);
  p.slot = sim::SimTime::from_us(slot_us);
  p.cw_min = cw_min;
  p.cw_max = cw_max;
  p.retry_limit = retry_limit;
  p.frame_overhead_bytes = frame_overhead_bytes;
  p.ifq_limit = ifq_limit;
  p.radio_range = radio_range;
  return p;
}

phy::MobilityParams ScenarioConfig::mobility_params() const {
  return phy::MobilityParams{area_side, speed_min, speed_max, pause_s};
}

routing::RoutingParams ScenarioConfig::routing_params() const {
  routing::RoutingParams p;
  p.route_lifetime = sim::SimTime::from_seconds(route_lifetime_s);
  p.discovery_timeout = sim::SimTime::from_seconds(discovery_timeout_s);
  p.discovery_retries = discovery_retries;
  p.pending_limit = pending_limit;
  p.rreq_jitter_s = rreq_jitter_s;
  p.net_diameter = net_diameter;
  return p;
}

tcp::TcpParams ScenarioConfig::tcp_params() const {
  tcp::TcpParams p;
  p.segment_size = segment_size;
  p.rwnd_segments = rwnd_segments;
  p.rto_min_s = rto_min_s;
  p.rto_max_s = rto_max_s;
  p.rto_initial_s = rto_initial_s;
  p.vegas_alpha = vegas_alpha;
  p.vegas_beta = vegas_beta;
  p.vegas_gamma = vegas_gamma;
  p.vegas_loss_factor = vegas_loss_factor;
  p.max_consecutive_timeouts = max_consecutive_timeouts;
  return p;
}

app::TrafficParams ScenarioConfig::traffic_params() const {
  return app::TrafficParams{sim::SimTime::from_seconds(reporting_interval_s(traffic_state)),
                            message_size};
}

app::BatchParams ScenarioConfig::batch_params() const {
  return app::BatchParams{sim::SimTime::from_seconds(batch_interval_s), batch_bytes};
}

ScenarioConfig parse_config(std::string_view text, const std::string& origin) {
  ScenarioConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      set_config_value(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::string out;
  for (const KeyHandler& h : handlers()) out += h.name + "=" + h.get(cfg) + "\n";
  return out;
}

}  // namespace wsn::scenario
