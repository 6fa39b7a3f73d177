#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>

#include "wsn/app/message.hpp"
#include "wsn/sim/time.hpp"

namespace wsn::metrics {

using app::Message;
using phy::NodeId;
using sim::SimTime;

struct PairThroughput {
  std::uint64_t delivered_bits = 0;
  double kbps = 0.0;
};

struct Summary {
  double throughput_kbps = 0.0;  // sum over source-destination pairs
  double mean_delay_ms = 0.0;    // NaN when nothing was delivered
  double pdr = 0.0;              // NaN when nothing was generated
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::map<std::pair<NodeId, NodeId>, PairThroughput> pairs;
};

// Per-run metric collector over the measurement window [warmup, end].
// Messages created before the warm-up ends are excluded from every metric.
class Collector {
 public:
  Collector(SimTime warmup_end, SimTime run_end);

  // A new application message entered a transport connection.
  void record_generation(const Message& m);
  // `m` reached the final sink at `at`. Throws ModelError on an unknown or
  // already-delivered id.
  void record_delivery(const Message& m, SimTime at);
  // `m` crossed one transport connection (src -> dst), for the per-pair
  // throughput. Every leg of a relayed message counts for its own pair.
  void record_leg(NodeId src, NodeId dst, const Message& m, SimTime at);

  Summary summarize() const;

  double window_seconds() const { return (run_end_ - warmup_end_).seconds(); }
  bool measured(const Message& m) const { return m.created_at >= warmup_end_; }
  // Payload bits of all measured messages generated so far.
  std::uint64_t generated_bits() const { return generated_bits_; }

 private:
  struct Entry {
    SimTime created_at;
    bool measured = false;
    bool delivered = false;
  };

  SimTime warmup_end_;
  SimTime run_end_;
  std::unordered_map<std::uint64_t, Entry> messages_;
  std::uint64_t generated_ = 0;
  std::uint64_t generated_bits_ = 0;
  std::uint64_t delivered_ = 0;
  double delay_sum_s_ = 0.0;
  std::map<std::pair<NodeId, NodeId>, std::uint64_t> pair_bits_;
};

// Kbps (1000 bit/s) carried by `bits` over `seconds`.
double kbps(std::uint64_t bits, double seconds);

}  // namespace wsn::metrics
