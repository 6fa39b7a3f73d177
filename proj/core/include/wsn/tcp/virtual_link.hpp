#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "wsn/sim/scheduler.hpp"
#include "wsn/tcp/receiver.hpp"
#include "wsn/tcp/sender.hpp"

namespace wsn::tcp {

// A single connection over an idealised point-to-point path: fixed
// propagation delay each way, an optional bottleneck that serialises data
// segments, and scripted or predicate-driven losses. Used to drive the
// congestion-control state machines deterministically.
struct VirtualLinkConfig {
  SimTime rtt = SimTime::from_seconds(0.1);
  // Per data segment serialisation time at the bottleneck (zero: infinite rate).
  SimTime service_time = SimTime::zero();
  // Segment indices (seq / segment_size) lost on their first transmission.
  std::set<std::uint64_t> lose_first_tx;
  // Optional extra loss decision for every data transmission; receives the
  // transmission and its global transmission counter.
  std::function<bool(const Transmit&, std::uint64_t)> lose_data;
  // Optional loss decision for every ACK (argument: ack counter).
  std::function<bool(std::uint64_t)> lose_ack;
  // Optional extra one-way delay for a data transmission (reordering).
  std::function<SimTime(const Transmit&, std::uint64_t)> extra_delay;
  // Perform the SYN/SYN-ACK exchange instead of starting established.
  bool handshake = false;
};

struct TxRecord {
  SimTime t;
  Transmit tx;
};

class VirtualLink {
 public:
  VirtualLink(Variant variant, TcpParams params, VirtualLinkConfig config);

  // Application write at time `at` (bytes appended to the send buffer).
  void write_at(SimTime at, std::uint64_t bytes);
  void run_until(SimTime t_end);

  const Sender& sender() const { return sender_; }
  Sender& sender() { return sender_; }
  const Receiver& receiver() const { return receiver_; }
  // Trajectory of (cwnd, ssthresh, state), one point per change.
  const std::vector<TracePoint>& trace() const { return trace_; }
  // Byte ranges handed to the receiving application, in order.
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& delivered() const {
    return delivered_;
  }
  std::uint64_t delivered_bytes() const { return delivered_bytes_; }
  // Every data (re)transmission the sender emitted, lost or not.
  const std::vector<TxRecord>& transmissions() const { return transmissions_; }
  sim::Scheduler& scheduler() { return scheduler_; }

 private:
  void after_sender_event();
  void transmit(const Transmit& tx);
  void on_data_arrival(std::uint64_t seq, std::uint32_t len);
  void record();

  sim::Scheduler scheduler_;
  Sender sender_;
  Receiver receiver_;
  VirtualLinkConfig config_;
  SimTime half_rtt_;
  SimTime bottleneck_free_;
  std::uint64_t data_tx_count_ = 0;
  std::uint64_t ack_count_ = 0;
  std::optional<SimTime> armed_deadline_;
  sim::EventHandle timer_;
  std::vector<TracePoint> trace_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> delivered_;
  std::uint64_t delivered_bytes_ = 0;
  std::vector<TxRecord> transmissions_;
};

}  // namespace wsn::tcp
