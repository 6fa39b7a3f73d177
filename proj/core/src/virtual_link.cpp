#include "wsn/tcp/virtual_link.hpp"

#include <algorithm>

#include "wsn/error.hpp"

namespace wsn::tcp {

using sim::EventKind;

VirtualLink::VirtualLink(Variant variant, TcpParams params, VirtualLinkConfig config)
    : sender_(variant, params),
      config_(std::move(config)),
      half_rtt_(SimTime::from_ns(config_.rtt.ns() / 2)) {
  if (config_.handshake) {
    sender_.open(SimTime::zero());
  } else {
    sender_.force_established();
  }
  record();
  after_sender_event();
}

void VirtualLink::write_at(SimTime at, std::uint64_t bytes) {
  scheduler_.schedule(at, EventKind::AppGenerate, 0, [this, bytes] {
    sender_.write(bytes);
    sender_.pump(scheduler_.now());
    after_sender_event();
  });
}

void VirtualLink::run_until(SimTime t_end) { scheduler_.run_until(t_end); }

void VirtualLink::record() {
  const TracePoint p = sender_.snapshot(scheduler_.now());
  if (trace_.empty() || trace_.back().cwnd != p.cwnd || trace_.back().ssthresh != p.ssthresh ||
      trace_.back().state != p.state) {
    trace_.push_back(p);
  }
}

void VirtualLink::after_sender_event() {
  if (sender_.take_reset()) {
    receiver_.reset();
  }
  for (const Transmit& tx : sender_.take_transmits()) transmit(tx);
  record();
  const auto deadline = sender_.rto_deadline();
  if (deadline != armed_deadline_) {
    scheduler_.cancel(timer_);
    timer_ = {};
    armed_deadline_ = deadline;
    if (deadline) {
      timer_ = scheduler_.schedule(*deadline, EventKind::RtoExpiry, 0, [this] {
        armed_deadline_.reset();
        timer_ = {};
        sender_.on_timeout(scheduler_.now());
        after_sender_event();
      });
    }
  }
}

void VirtualLink::transmit(const Transmit& tx) {
  const SimTime now = scheduler_.now();
  if (tx.flag == SegmentFlag::Syn) {
    scheduler_.schedule(now + config_.rtt, EventKind::FrameArrival, 0, [this] {
      sender_.on_syn_ack(scheduler_.now());
      after_sender_event();
    });
    return;
  }
  transmissions_.push_back(TxRecord{now, tx});
  const std::uint64_t index = data_tx_count_++;
  SimTime depart = now;
  if (config_.service_time > SimTime::zero()) {
    depart = std::max(now, bottleneck_free_) + config_.service_time;
    bottleneck_free_ = depart;
  }
  const std::uint64_t segment_index = tx.seq / sender_.params().segment_size;
  bool lost = !tx.retransmit && config_.lose_first_tx.contains(segment_index);
  if (!lost && config_.lose_data) lost = config_.lose_data(tx, index);
  if (lost) return;
  SimTime arrive = depart + half_rtt_;
  if (config_.extra_delay) arrive += config_.extra_delay(tx, index);
  const std::uint32_t incarnation = sender_.incarnation();
  scheduler_.schedule(arrive, EventKind::FrameArrival, 1,
                      [this, seq = tx.seq, len = tx.len, incarnation] {
                        if (incarnation != sender_.incarnation()) return;
                        on_data_arrival(seq, len);
                      });
}

void VirtualLink::on_data_arrival(std::uint64_t seq, std::uint32_t len) {
  const Receiver::Result r = receiver_.on_segment(seq, len);
  if (r.delivered.second > r.delivered.first) {
    delivered_.push_back(r.delivered);
    delivered_bytes_ += r.delivered.second - r.delivered.first;
  }
  const std::uint64_t index = ack_count_++;
  if (config_.lose_ack && config_.lose_ack(index)) return;
  const std::uint32_t incarnation = sender_.incarnation();
  scheduler_.schedule(scheduler_.now() + half_rtt_, EventKind::FrameArrival, 0,
                      [this, ack = r.ack, incarnation] {
                        if (incarnation != sender_.incarnation()) return;
                        sender_.on_ack(scheduler_.now(), ack);
                        after_sender_event();
                      });
}

}  // namespace wsn::tcp
