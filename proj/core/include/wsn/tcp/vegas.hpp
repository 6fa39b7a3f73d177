#pragma once

#include <algorithm>

namespace wsn::tcp {

// Vegas estimate of the segments queued in the network:
// (expected - actual) * base_rtt with expected = cwnd / base_rtt and
// actual = cwnd / rtt.
inline double vegas_diff(double cwnd, double base_rtt_s, double rtt_s) {
  return (cwnd / base_rtt_s - cwnd / rtt_s) * base_rtt_s;
}

// Congestion-avoidance window decision taken once per round trip.
inline double vegas_next_cwnd(double cwnd, double diff, double alpha, double beta, double cap) {
  if (diff < alpha) return std::min(cwnd + 1.0, cap);
  if (diff > beta) return std::max(cwnd - 1.0, 1.0);
  return cwnd;
}

}  // namespace wsn::tcp
