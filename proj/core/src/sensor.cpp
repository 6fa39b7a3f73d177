#include "wsn/app/sensor.hpp"

#include "wsn/error.hpp"

namespace wsn::app {

SensorApp::SensorApp(NodeId node, sim::Scheduler& scheduler, TrafficParams params,
                     tcp::Connection& connection, MessageStream& stream,
                     std::uint64_t& id_counter, OnGenerate on_generate)
    : node_(node),
      scheduler_(scheduler),
      params_(params),
      connection_(connection),
      stream_(stream),
      id_counter_(id_counter),
      on_generate_(std::move(on_generate)) {
  if (params_.interval <= SimTime::zero()) throw ConfigError("reporting interval must be positive");
  if (params_.message_size == 0) throw ConfigError("message size must be positive");
}

void SensorApp::start(SimTime first) {
  scheduler_.schedule(first, sim::EventKind::AppGenerate, node_, [this] { tick(); });
}

void SensorApp::tick() {
  const SimTime now = scheduler_.now();
  scheduler_.schedule(now + params_.interval, sim::EventKind::AppGenerate, node_,
                      [this] { tick(); });
  if (connection_.writable_bytes() < params_.message_size) {
    ++blocked_;
    return;
  }
  Message m;
  m.id = ++id_counter_;
  m.origin = node_;
  m.created_at = now;
  m.size_bytes = params_.message_size;
  ++generated_;
  stream_.push(m);
  if (on_generate_) on_generate_(m);
  connection_.write(m.size_bytes);
}

}  // namespace wsn::app
