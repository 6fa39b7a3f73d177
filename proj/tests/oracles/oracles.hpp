#pragma once

// Exact protocol-level oracles shared by the unit tests and the acceptance
// runner. Each check returns the list of mismatches it found; an empty list
// means the behaviour matches the hand-derived expectation.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wsn/tcp/sender.hpp"

namespace wsn::oracles {

using Mismatches = std::vector<std::string>;

// -------------------------------------------------------------- golden traces

// One scripted virtual-link scenario with its hand-derived congestion
// trajectory (100 ms RTT, one ack per segment, losses at fixed indices).
struct GoldenCase {
  std::string name;
  std::function<Mismatches()> check;
};

const std::vector<GoldenCase>& golden_cases();

// ------------------------------------------------------------ reliable stream

// Randomised lossy, reordering virtual link driven by `seed`; the receiving
// application must see the written byte stream exactly once and in order.
// Returns an empty string on success, otherwise what went wrong.
std::string reliability_trace(tcp::Variant variant, std::uint64_t seed);

inline constexpr int kReliabilityTracesPerVariant = 1000;

// Seed of trace `index` (0-based) for `variant`.
std::uint64_t reliability_seed(tcp::Variant variant, int index);

// ------------------------------------------------------- analytic micro-chain

// One 512-byte segment across a static three-node line (nodes 90 m apart,
// ends hidden from each other) with routes pre-installed and every backoff
// draw pinned: `first_slots` at the source, `second_slots` at the relay.
struct ChainOutcome {
  bool delivered = false;
  double measured_us = 0.0;
  double expected_us = 0.0;  // 2 DIFS + backoff slots + 2 airtimes
  std::uint32_t transmissions = 0;
};

ChainOutcome three_node_chain(std::uint32_t first_slots, std::uint32_t second_slots);

}  // namespace wsn::oracles
