#pragma once

#include <cstdint>

#include "wsn/sim/time.hpp"

namespace wsn::tcp {

using ConnId = std::uint32_t;

enum class SegmentFlag : std::uint8_t { None, Syn, SynAck };

// Structured transport unit; there is no byte-level header encoding.
struct Segment {
  ConnId conn = 0;
  std::uint32_t incarnation = 0;  // bumped when a connection resets
  std::uint64_t seq = 0;          // first payload byte
  std::uint64_t ack = 0;          // cumulative ack (valid when is_ack)
  std::uint32_t payload_bytes = 0;
  bool is_ack = false;
  SegmentFlag flag = SegmentFlag::None;
  sim::SimTime sent_at;
};

inline constexpr std::uint32_t kHeaderBytes = 40;  // TCP + IP

inline std::uint32_t wire_bytes(const Segment& s) { return kHeaderBytes + s.payload_bytes; }

}  // namespace wsn::tcp
