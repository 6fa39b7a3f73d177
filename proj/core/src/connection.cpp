#include "wsn/tcp/connection.hpp"

#include "wsn/error.hpp"

namespace wsn::tcp {

using sim::EventKind;

Connection::Connection(ConnId id, NodeId src, NodeId dst, Variant variant, TcpParams params,
                       std::uint64_t send_buffer_bytes, sim::Scheduler& scheduler)
    : id_(id),
      src_(src),
      dst_(dst),
      send_buffer_bytes_(send_buffer_bytes),
      scheduler_(scheduler),
      sender_(variant, params) {
  if (send_buffer_bytes_ == 0) throw ConfigError("send buffer must hold at least one byte");
}

void Connection::open() {
  sender_.open(scheduler_.now());
  sync();
}

std::uint64_t Connection::writable_bytes() const {
  if (!sender_.established()) return 0;
  const std::uint64_t used = sender_.send_buffer_used();
  return used >= send_buffer_bytes_ ? 0 : send_buffer_bytes_ - used;
}

void Connection::write(std::uint64_t bytes) {
  if (bytes > writable_bytes()) throw ModelError("write exceeds the free send buffer");
  sender_.write(bytes);
  sender_.pump(scheduler_.now());
  sync();
}

void Connection::emit(NodeId from, NodeId to, Segment segment) {
  segment.conn = id_;
  segment.sent_at = scheduler_.now();
  if (hooks_.transmit) hooks_.transmit(from, to, segment);
}

void Connection::on_arrival(NodeId at, const Segment& segment) {
  if (segment.conn != id_) throw ModelError("segment delivered to the wrong connection");
  if (at == dst_ && !segment.is_ack) {
    receiver_side(segment);
  } else if (at == src_ && segment.is_ack) {
    sender_side(segment);
  } else {
    throw ModelError("segment arrived at an endpoint that cannot consume it");
  }
}

void Connection::receiver_side(const Segment& segment) {
  if (segment.flag == SegmentFlag::Syn) {
    if (!rx_open_ || segment.incarnation > rx_incarnation_) {
      rx_open_ = true;
      rx_incarnation_ = segment.incarnation;
      receiver_.reset();
    }
    if (segment.incarnation == rx_incarnation_) {
      Segment reply;
      reply.incarnation = rx_incarnation_;
      reply.is_ack = true;
      reply.flag = SegmentFlag::SynAck;
      emit(dst_, src_, reply);
    }
    return;
  }
  if (!rx_open_ || segment.incarnation != rx_incarnation_) return;  // stale stream
  const Receiver::Result r = receiver_.on_segment(segment.seq, segment.payload_bytes);
  Segment ack;
  ack.incarnation = rx_incarnation_;
  ack.is_ack = true;
  ack.ack = r.ack;
  emit(dst_, src_, ack);
  if (r.delivered.second > r.delivered.first && hooks_.on_delivered) {
    hooks_.on_delivered(r.delivered.first, r.delivered.second);
  }
}

void Connection::sender_side(const Segment& segment) {
  if (segment.incarnation != sender_.incarnation()) return;
  if (segment.flag == SegmentFlag::SynAck) {
    sender_.on_syn_ack(scheduler_.now());
  } else {
    sender_.on_ack(scheduler_.now(), segment.ack);
  }
  sync();
}

void Connection::sync() {
  const bool reset = sender_.take_reset();
  if (reset) {
    last_writable_ = 0;
    last_established_ = false;
    if (hooks_.on_reset) hooks_.on_reset();
  }
  for (const Transmit& tx : sender_.take_transmits()) {
    Segment s;
    s.incarnation = sender_.incarnation();
    s.seq = tx.seq;
    s.payload_bytes = tx.len;
    s.flag = tx.flag;
    emit(src_, dst_, s);
  }

  if (hooks_.on_trace) {
    const TracePoint p = sender_.snapshot(scheduler_.now());
    if (!last_trace_ || last_trace_->cwnd != p.cwnd || last_trace_->ssthresh != p.ssthresh ||
        last_trace_->state != p.state) {
      last_trace_ = p;
      hooks_.on_trace(p);
    }
  }

  const auto deadline = sender_.rto_deadline();
  if (deadline != armed_deadline_) {
    scheduler_.cancel(timer_);
    timer_ = {};
    armed_deadline_ = deadline;
    if (deadline) {
      timer_ = scheduler_.schedule(*deadline, EventKind::RtoExpiry, id_, [this] {
        armed_deadline_.reset();
        timer_ = {};
        sender_.on_timeout(scheduler_.now());
        sync();
      });
    }
  }

  const std::uint64_t writable = writable_bytes();
  const bool grew = writable > last_writable_ || (sender_.established() && !last_established_);
  last_writable_ = writable;
  last_established_ = sender_.established();
  if (grew && writable > 0 && hooks_.on_writable) hooks_.on_writable();
}

}  // namespace wsn::tcp
