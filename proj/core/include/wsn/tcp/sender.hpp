#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "wsn/sim/time.hpp"
#include "wsn/tcp/segment.hpp"

namespace wsn::tcp {

using sim::SimTime;

enum class Variant : std::uint8_t { Tcp, Reno, NewReno, Vegas };
enum class CcState : std::uint8_t { SlowStart, CongestionAvoidance, FastRecovery };

const char* to_string(Variant v);
const char* to_string(CcState s);
std::optional<Variant> parse_variant(std::string_view text);

struct TcpParams {
  std::uint32_t segment_size = 512;
  std::uint32_t rwnd_segments = 64;
  double rto_min_s = 0.2;
  double rto_max_s = 60.0;
  double rto_initial_s = 1.0;
  double initial_cwnd = 1.0;
  double initial_ssthresh = 64.0;
  double vegas_alpha = 1.0;
  double vegas_beta = 3.0;
  double vegas_gamma = 1.0;
  double vegas_loss_factor = 0.75;  // cwnd multiplier on a Vegas loss
  std::uint32_t max_consecutive_timeouts = 12;
};

// One (re)transmission the sender wants on the wire.
struct Transmit {
  std::uint64_t seq = 0;
  std::uint32_t len = 0;
  bool retransmit = false;
  SegmentFlag flag = SegmentFlag::None;
};

struct TracePoint {
  SimTime t;
  double cwnd = 0.0;
  double ssthresh = 0.0;
  CcState state = CcState::SlowStart;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct SenderStats {
  std::uint64_t segments_sent = 0;
  std::uint64_t retransmits = 0;
  std::uint64_t fast_retransmits = 0;
  std::uint64_t fast_recovery_entries = 0;
  std::uint64_t early_retransmits = 0;  // Vegas fine-clock retransmissions
  std::uint64_t timeouts = 0;
  std::uint64_t resets = 0;
};

// Congestion-controlled sender half of a connection. A pure state machine:
// callers feed it time-stamped events and drain the resulting transmissions
// with take_transmits(); the retransmission timer is exposed as a deadline
// that the caller arms on its own scheduler.
class Sender {
 public:
  Sender(Variant variant, TcpParams params);

  // ---- application side
  std::uint64_t send_buffer_used() const { return write_end_ - snd_una_; }
  void write(std::uint64_t bytes) { write_end_ += bytes; }
  std::uint64_t write_end() const { return write_end_; }

  // ---- connection lifecycle
  // Starts the handshake: emits a SYN and arms the timer.
  void open(SimTime now);
  void on_syn_ack(SimTime now);
  bool established() const { return established_; }
  std::uint32_t incarnation() const { return incarnation_; }
  // Test hook: skip the handshake entirely.
  void force_established() { established_ = true; }

  // ---- network events
  void on_ack(SimTime now, std::uint64_t ackno);
  void on_timeout(SimTime now);
  // Emits new segments while the window allows.
  void pump(SimTime now);

  std::vector<Transmit> take_transmits();
  std::optional<SimTime> rto_deadline() const { return deadline_; }
  // True once after the sender gave up and reset; bytes written before the
  // reset are gone and the stream restarts at offset 0.
  bool take_reset() {
    const bool r = reset_pending_;
    reset_pending_ = false;
    return r;
  }

  // ---- state inspection
  Variant variant() const { return variant_; }
  CcState state() const { return state_; }
  double cwnd() const { return cwnd_; }
  double ssthresh() const { return ssthresh_; }
  std::uint64_t snd_una() const { return snd_una_; }
  std::uint64_t snd_nxt() const { return snd_nxt_; }
  std::uint64_t snd_max() const { return snd_max_; }
  std::uint64_t recover() const { return recover_; }
  std::uint32_t dup_acks() const { return dup_acks_; }
  std::uint32_t flight_segments() const;
  double srtt() const { return srtt_; }
  double rttvar() const { return rttvar_; }
  double rto() const { return rto_; }
  double base_rtt() const { return base_rtt_; }
  bool has_rtt_sample() const { return has_sample_; }
  const SenderStats& stats() const { return stats_; }
  const TcpParams& params() const { return params_; }
  TracePoint snapshot(SimTime t) const { return {t, cwnd_, ssthresh_, state_}; }

  // ---- exposed pieces of the variant logic (driven internally, public for tests)
  void rto_update(double sample_s);
  // Once-per-RTT Vegas window decision using the given RTT.
  void vegas_adjust(double last_rtt_s);
  // Vegas fine-clock loss check on the segment at snd_una; retransmits and
  // returns true when it has been outstanding longer than srtt + 4*rttvar.
  bool vegas_check_retransmit(SimTime now);

 private:
  struct SegInfo {
    std::uint32_t len = 0;
    SimTime sent_at;
    std::uint32_t tx_count = 0;
  };

  void on_new_ack(SimTime now, std::uint64_t ackno);
  void on_dup_ack(SimTime now);
  void on_partial_or_full_ack(SimTime now, std::uint64_t ackno, std::uint32_t newly_acked);
  void grow_window();
  void enter_loss_recovery_tahoe(SimTime now);
  void vegas_loss_response();
  void retransmit_head(SimTime now);
  void send_segment(SimTime now, std::uint64_t seq, std::uint32_t len);
  void restart_timer(SimTime now);
  void reset_connection(SimTime now);
  void check_invariants() const;
  std::uint32_t window_segments() const;

  Variant variant_;
  TcpParams params_;

  bool established_ = false;
  bool syn_retransmitted_ = false;
  SimTime syn_sent_at_;
  std::uint32_t incarnation_ = 0;
  bool reset_pending_ = false;

  CcState state_ = CcState::SlowStart;
  double cwnd_;
  double ssthresh_;
  std::uint64_t snd_una_ = 0;
  std::uint64_t snd_nxt_ = 0;
  std::uint64_t snd_max_ = 0;
  std::uint64_t write_end_ = 0;
  std::uint64_t recover_ = 0;
  std::uint32_t dup_acks_ = 0;
  std::uint32_t consecutive_timeouts_ = 0;

  double srtt_ = 0.0;
  double rttvar_ = 0.0;
  double rto_;
  bool has_sample_ = false;
  double base_rtt_;

  // Vegas round bookkeeping.
  std::uint64_t vegas_round_marker_ = 0;
  bool vegas_round_sample_ = false;
  double vegas_last_rtt_ = 0.0;
  bool vegas_ss_grow_ = true;
  std::uint64_t vegas_cut_guard_ = 0;
  bool vegas_recheck_ = false;
  bool vegas_retx_this_run_ = false;

  std::map<std::uint64_t, SegInfo> segments_;  // every byte range sent but not yet acked
  std::vector<Transmit> out_;
  std::optional<SimTime> deadline_;
  SenderStats stats_;
};

}  // namespace wsn::tcp
