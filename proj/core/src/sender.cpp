#include "wsn/tcp/sender.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wsn/error.hpp"
#include "wsn/tcp/vegas.hpp"

namespace wsn::tcp {

const char* to_string(Variant v) {
  switch (v) {
    case Variant::Tcp: return "Tcp";
    case Variant::Reno: return "Reno";
    case Variant::NewReno: return "NewReno";
    case Variant::Vegas: return "Vegas";
  }
  return "unknown";
}

const char* to_string(CcState s) {
  switch (s) {
    case CcState::SlowStart: return "SlowStart";
    case CcState::CongestionAvoidance: return "CongestionAvoidance";
    case CcState::FastRecovery: return "FastRecovery";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view text) {
  for (Variant v : {Variant::Tcp, Variant::Reno, Variant::NewReno, Variant::Vegas}) {
    if (text == to_string(v)) return v;
  }
  return std::nullopt;
}

Sender::Sender(Variant variant, TcpParams params)
    : variant_(variant),
      params_(params),
      cwnd_(params.initial_cwnd),
      ssthresh_(params.initial_ssthresh),
      rto_(params.rto_initial_s),
      base_rtt_(std::numeric_limits<double>::infinity()) {
  if (cwnd_ >= ssthresh_) state_ = CcState::CongestionAvoidance;
  check_invariants();
}

std::uint32_t Sender::flight_segments() const {
  const auto end = segments_.lower_bound(snd_nxt_);
  return static_cast<std::uint32_t>(std::distance(segments_.begin(), end));
}

std::uint32_t Sender::window_segments() const {
  return static_cast<std::uint32_t>(
      std::floor(std::min(cwnd_, static_cast<double>(params_.rwnd_segments))));
}

std::vector<Transmit> Sender::take_transmits() {
  std::vector<Transmit> out;
  out.swap(out_);
  return out;
}

void Sender::restart_timer(SimTime now) { deadline_ = now + SimTime::from_seconds(rto_); }

void Sender::open(SimTime now) {
  established_ = false;
  syn_sent_at_ = now;
  syn_retransmitted_ = false;
  out_.push_back(Transmit{0, 0, false, SegmentFlag::Syn});
  restart_timer(now);
}

void Sender::on_syn_ack(SimTime now) {
  if (established_) return;
  established_ = true;
  consecutive_timeouts_ = 0;
  deadline_.reset();
  pump(now);
  check_invariants();
}

void Sender::send_segment(SimTime now, std::uint64_t seq, std::uint32_t len) {
  SegInfo& info = segments_[seq];
  info.len = len;
  info.sent_at = now;
  ++info.tx_count;
  const bool retx = info.tx_count > 1;
  ++stats_.segments_sent;
  if (retx) ++stats_.retransmits;
  out_.push_back(Transmit{seq, len, retx, SegmentFlag::None});
}

void Sender::pump(SimTime now) {
  if (!established_) return;
  const std::uint32_t window = window_segments();
  while (snd_nxt_ < write_end_ && flight_segments() < window) {
    std::uint32_t len;
    if (auto it = segments_.find(snd_nxt_); it != segments_.end()) {
      len = it->second.len;
    } else {
      len = static_cast<std::uint32_t>(
          std::min<std::uint64_t>(params_.segment_size, write_end_ - snd_nxt_));
    }
    send_segment(now, snd_nxt_, len);
    snd_nxt_ += len;
    snd_max_ = std::max(snd_max_, snd_nxt_);
    if (!deadline_) restart_timer(now);
  }
}

void Sender::retransmit_head(SimTime now) {
  auto it = segments_.find(snd_una_);
  if (it == segments_.end()) throw ModelError("retransmission requested with nothing outstanding");
  send_segment(now, snd_una_, it->second.len);
  snd_nxt_ = std::max(snd_nxt_, snd_una_ + it->second.len);
}

void Sender::on_ack(SimTime now, std::uint64_t ackno) {
  if (!established_) return;
  if (ackno > snd_max_) {
    std::ostringstream msg;
    msg << "ack " << ackno << " covers data never sent (snd_max " << snd_max_ << ")";
    throw ModelError(msg.str());
  }
  if (ackno < snd_una_) return;  // stale
  if (ackno == snd_una_) {
    if (snd_max_ > snd_una_) on_dup_ack(now);
  } else {
    on_new_ack(now, ackno);
  }
  pump(now);
  check_invariants();
}

void Sender::on_new_ack(SimTime now, std::uint64_t ackno) {
  std::uint32_t newly_acked = 0;
  std::optional<double> sample;
  auto it = segments_.begin();
  while (it != segments_.end() && it->first + it->second.len <= ackno) {
    // Karn: only the segment that completes this ack may give a sample, and
    // only if it was transmitted exactly once.
    if (it->second.tx_count == 1) {
      sample = (now - it->second.sent_at).seconds();
    } else {
      sample.reset();
    }
    ++newly_acked;
    it = segments_.erase(it);
  }
  snd_una_ = ackno;
  snd_nxt_ = std::max(snd_nxt_, ackno);
  consecutive_timeouts_ = 0;
  if (sample) rto_update(*sample);

  if (variant_ == Variant::Vegas) {
    vegas_retx_this_run_ = false;
    if (sample) {
      vegas_last_rtt_ = *sample;
      vegas_round_sample_ = true;
    }
    if (ackno > vegas_round_marker_) {
      if (vegas_round_sample_ && std::isfinite(base_rtt_)) vegas_adjust(vegas_last_rtt_);
      vegas_round_marker_ = snd_nxt_;
      vegas_round_sample_ = false;
    }
    if (state_ == CcState::SlowStart && vegas_ss_grow_) grow_window();
    dup_acks_ = 0;
    if (vegas_recheck_) {
      vegas_recheck_ = false;
      if (snd_max_ > snd_una_) vegas_check_retransmit(now);
    }
  } else if (state_ == CcState::FastRecovery) {
    if (variant_ == Variant::NewReno) {
      on_partial_or_full_ack(now, ackno, newly_acked);
    } else {
      cwnd_ = ssthresh_;
      state_ = CcState::CongestionAvoidance;
    }
    dup_acks_ = 0;
  } else {
    grow_window();
    dup_acks_ = 0;
  }

  if (snd_max_ > snd_una_) {
    restart_timer(now);
  } else {
    deadline_.reset();
  }
}

void Sender::grow_window() {
  const double cap = params_.rwnd_segments;
  if (state_ == CcState::SlowStart) {
    cwnd_ = std::min(cwnd_ + 1.0, cap);
    if (cwnd_ >= ssthresh_) state_ = CcState::CongestionAvoidance;
  } else if (state_ == CcState::CongestionAvoidance) {
    // One segment per window's worth of ACKs, counted against the integral
    // window so that cwnd = w advances to exactly w + 1 after w ACKs.
    cwnd_ = std::min(cwnd_ + 1.0 / std::floor(cwnd_), cap);
  }
}

void Sender::on_dup_ack(SimTime now) {
  ++dup_acks_;
  if (state_ == CcState::FastRecovery) {
    cwnd_ += 1.0;  // window inflation
    return;
  }
  if (variant_ == Variant::Vegas) {
    if (dup_acks_ < 3) {
      if (!vegas_retx_this_run_ && vegas_check_retransmit(now)) vegas_retx_this_run_ = true;
    } else if (dup_acks_ == 3 && !vegas_retx_this_run_) {
      ++stats_.fast_retransmits;
      retransmit_head(now);
      vegas_loss_response();
      vegas_recheck_ = true;
      vegas_retx_this_run_ = true;
      restart_timer(now);
    }
    return;
  }
  if (dup_acks_ != 3) return;

  const std::uint32_t flight = flight_segments();
  ssthresh_ = std::max<double>(flight / 2, 2.0);
  ++stats_.fast_retransmits;
  if (variant_ == Variant::Tcp) {
    enter_loss_recovery_tahoe(now);
    return;
  }
  cwnd_ = ssthresh_ + 3.0;
  state_ = CcState::FastRecovery;
  ++stats_.fast_recovery_entries;
  if (variant_ == Variant::NewReno) recover_ = snd_max_;
  retransmit_head(now);
  restart_timer(now);
}

void Sender::enter_loss_recovery_tahoe(SimTime now) {
  cwnd_ = 1.0;
  state_ = CcState::SlowStart;
  // Go back N: everything after the retransmitted segment is resent as the
  // window reopens.
  snd_nxt_ = snd_una_;
  retransmit_head(now);
  restart_timer(now);
}

void Sender::on_partial_or_full_ack(SimTime now, std::uint64_t ackno, std::uint32_t newly_acked) {
  if (ackno >= recover_) {
    cwnd_ = ssthresh_;
    state_ = CcState::CongestionAvoidance;
    return;
  }
  retransmit_head(now);
  cwnd_ = std::max(cwnd_ - newly_acked + 1.0, 1.0);
}

void Sender::vegas_adjust(double last_rtt_s) {
  const double diff = vegas_diff(cwnd_, base_rtt_, last_rtt_s);
  if (state_ == CcState::SlowStart) {
    if (diff > params_.vegas_gamma) {
      state_ = CcState::CongestionAvoidance;
    } else {
      vegas_ss_grow_ = !vegas_ss_grow_;
    }
    return;
  }
  cwnd_ = vegas_next_cwnd(cwnd_, diff, params_.vegas_alpha, params_.vegas_beta,
                          static_cast<double>(params_.rwnd_segments));
}

bool Sender::vegas_check_retransmit(SimTime now) {
  if (variant_ != Variant::Vegas) return false;
  auto it = segments_.find(snd_una_);
  if (it == segments_.end()) return false;
  const double threshold = has_sample_ ? srtt_ + 4.0 * rttvar_ : rto_;
  if ((now - it->second.sent_at).seconds() <= threshold) return false;
  ++stats_.early_retransmits;
  retransmit_head(now);
  vegas_loss_response();
  vegas_recheck_ = true;
  restart_timer(now);
  return true;
}

void Sender::vegas_loss_response() {
  // At most one reduction per window of data.
  if (snd_una_ < vegas_cut_guard_) return;
  cwnd_ = std::max(cwnd_ * params_.vegas_loss_factor, 1.0);
  ssthresh_ = std::max(cwnd_, 2.0);
  if (state_ == CcState::SlowStart) state_ = CcState::CongestionAvoidance;
  vegas_cut_guard_ = snd_max_;
}

void Sender::rto_update(double sample_s) {
  if (!has_sample_) {
    srtt_ = sample_s;
    rttvar_ = sample_s / 2.0;
    has_sample_ = true;
  } else {
    rttvar_ = 0.75 * rttvar_ + 0.25 * std::abs(srtt_ - sample_s);
    srtt_ = 0.875 * srtt_ + 0.125 * sample_s;
  }
  rto_ = std::clamp(srtt_ + 4.0 * rttvar_, params_.rto_min_s, params_.rto_max_s);
  if (variant_ == Variant::Vegas) base_rtt_ = std::min(base_rtt_, sample_s);
}

void Sender::on_timeout(SimTime now) {
  deadline_.reset();
  if (!established_) {
    ++stats_.timeouts;
    if (++consecutive_timeouts_ >= params_.max_consecutive_timeouts) {
      reset_connection(now);
      return;
    }
    rto_ = std::min(rto_ * 2.0, params_.rto_max_s);
    syn_retransmitted_ = true;
    out_.push_back(Transmit{0, 0, true, SegmentFlag::Syn});
    restart_timer(now);
    return;
  }
  if (snd_max_ == snd_una_) return;  // stale timer, nothing outstanding
  ++stats_.timeouts;
  if (++consecutive_timeouts_ >= params_.max_consecutive_timeouts) {
    reset_connection(now);
    return;
  }
  const std::uint32_t flight = flight_segments();
  ssthresh_ = std::max<double>(flight / 2, 2.0);
  cwnd_ = 1.0;
  state_ = CcState::SlowStart;
  dup_acks_ = 0;
  recover_ = snd_max_;
  rto_ = std::min(rto_ * 2.0, params_.rto_max_s);
  snd_nxt_ = snd_una_;
  retransmit_head(now);
  restart_timer(now);
  if (variant_ == Variant::Vegas) {
    vegas_ss_grow_ = true;
    vegas_round_marker_ = snd_nxt_;
    vegas_round_sample_ = false;
    vegas_cut_guard_ = snd_max_;
    vegas_recheck_ = false;
    vegas_retx_this_run_ = false;
  }
  check_invariants();
}

void Sender::reset_connection(SimTime now) {
  ++stats_.resets;
  ++incarnation_;
  reset_pending_ = true;
  segments_.clear();
  snd_una_ = snd_nxt_ = snd_max_ = write_end_ = 0;
  recover_ = 0;
  dup_acks_ = 0;
  consecutive_timeouts_ = 0;
  state_ = CcState::SlowStart;
  cwnd_ = params_.initial_cwnd;
  ssthresh_ = params_.initial_ssthresh;
  srtt_ = rttvar_ = 0.0;
  has_sample_ = false;
  rto_ = params_.rto_initial_s;
  base_rtt_ = std::numeric_limits<double>::infinity();
  vegas_round_marker_ = 0;
  vegas_round_sample_ = false;
  vegas_ss_grow_ = true;
  vegas_cut_guard_ = 0;
  vegas_recheck_ = false;
  vegas_retx_this_run_ = false;
  open(now);
}

void Sender::check_invariants() const {
  const char* broken = nullptr;
  if (!(cwnd_ >= 1.0)) broken = "cwnd >= 1";
  else if (!(ssthresh_ >= 2.0)) broken = "ssthresh >= 2";
  else if (!(snd_una_ <= snd_nxt_ && snd_nxt_ <= snd_max_ && snd_max_ <= write_end_)) broken = "snd_una <= snd_nxt <= snd_max <= write_end";
  else if (!(rto_ >= params_.rto_min_s && rto_ <= params_.rto_max_s)) broken = "rto within bounds";
  else if (state_ == CcState::FastRecovery && variant_ != Variant::Reno && variant_ != Variant::NewReno) broken = "fast recovery only for Reno/NewReno";
  if (broken) throw ModelError(std::string("tcp sender invariant violated: ") + broken);
}

}  // namespace wsn::tcp
