#include "wsn/metrics/collector.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wsn/error.hpp"

namespace wsn::metrics {

double kbps(std::uint64_t bits, double seconds) {
  if (seconds <= 0.0) throw ModelError("throughput over an empty window");
  return static_cast<double>(bits) / seconds / 1000.0;
}

Collector::Collector(SimTime warmup_end, SimTime run_end)
    : warmup_end_(warmup_end), run_end_(run_end) {
  if (run_end_ <= warmup_end_) throw ConfigError("run must end after the warm-up");
}

void Collector::record_generation(const Message& m) {
  const bool counted = measured(m);
  if (!messages_.try_emplace(m.id, Entry{m.created_at, counted, false}).second) {
    throw ModelError("message id " + std::to_string(m.id) + " generated twice");
  }
  if (counted) {
    ++generated_;
    generated_bits_ += 8ull * m.size_bytes;
  }
}

void Collector::record_delivery(const Message& m, SimTime at) {
  auto it = messages_.find(m.id);
  if (it == messages_.end()) {
    throw ModelError("delivery of unknown message id " + std::to_string(m.id));
  }
  Entry& e = it->second;
  if (e.delivered) throw ModelError("message id " + std::to_string(m.id) + " delivered twice");
  if (at < e.created_at) throw ModelError("message delivered before it was created");
  e.delivered = true;
  if (!e.measured) return;
  ++delivered_;
  delay_sum_s_ += (at - e.created_at).seconds();
}

void Collector::record_leg(NodeId src, NodeId dst, const Message& m, SimTime at) {
  if (!measured(m) || at > run_end_) return;
  pair_bits_[{src, dst}] += 8ull * m.size_bytes;
}

Summary Collector::summarize() const {
  Summary s;
  s.generated = generated_;
  s.delivered = delivered_;
  const double window = window_seconds();
  for (const auto& [pair, bits] : pair_bits_) {
    PairThroughput p{bits, kbps(bits, window)};
    s.throughput_kbps += p.kbps;
    s.pairs.emplace(pair, p);
  }
  s.mean_delay_ms = delivered_ > 0 ? 1000.0 * delay_sum_s_ / static_cast<double>(delivered_)
                                   : std::numeric_limits<double>::quiet_NaN();
  s.pdr = generated_ > 0 ? static_cast<double>(delivered_) / static_cast<double>(generated_)
                         : std::numeric_limits<double>::quiet_NaN();
  return s;
}

}  // namespace wsn::metrics
