#include "wsn/app/proxy.hpp"

#include <algorithm>

#include "wsn/error.hpp"

namespace wsn::app {

ProxyRelay::ProxyRelay(NodeId node, int section, sim::Scheduler& scheduler, BatchParams params,
                       tcp::Connection& outbound, MessageStream& outbound_stream,
                       std::function<int(NodeId)> section_of)
    : node_(node),
      section_(section),
      scheduler_(scheduler),
      params_(params),
      outbound_(outbound),
      stream_(outbound_stream),
      section_of_(std::move(section_of)) {
  if (params_.interval <= SimTime::zero()) throw ConfigError("batch interval must be positive");
  if (params_.bytes == 0) throw ConfigError("batch size must be positive");
}

void ProxyRelay::accept(Message m) {
  if (section_of_(m.origin) != section_) {
    ++cross_section_drops_;
    return;
  }
  m.proxy_arrival = scheduler_.now();
  batch_bytes_ += m.size_bytes;
  batch_.push_back(std::move(m));
  if (batch_bytes_ >= params_.bytes) {
    flush();
  } else if (!flush_timer_.valid()) {
    flush_timer_ = scheduler_.schedule_in(params_.interval, sim::EventKind::TimerExpiry, node_,
                                          [this] {
                                            flush_timer_ = {};
                                            flush();
                                          });
  }
}

void ProxyRelay::flush() {
  scheduler_.cancel(flush_timer_);
  flush_timer_ = {};
  if (batch_.empty()) return;
  ++flushes_;
  std::stable_sort(batch_.begin(), batch_.end(), [](const Message& a, const Message& b) {
    return a.created_at != b.created_at ? a.created_at < b.created_at : a.id < b.id;
  });
  for (Message& m : batch_) ready_.push_back(std::move(m));
  batch_.clear();
  batch_bytes_ = 0;
  drain();
}

void ProxyRelay::on_writable() { drain(); }

void ProxyRelay::drain() {
  while (!ready_.empty() && outbound_.writable_bytes() >= ready_.front().size_bytes) {
    Message m = std::move(ready_.front());
    ready_.pop_front();
    m.proxy_departure = scheduler_.now();
    ++relayed_;
    stream_.push(m);
    outbound_.write(m.size_bytes);
  }
}

}  // namespace wsn::app
