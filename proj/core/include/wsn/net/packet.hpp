#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "wsn/phy/node.hpp"
#include "wsn/tcp/segment.hpp"

namespace wsn::net {

using phy::NodeId;

struct Rreq {
  NodeId origin = 0;
  std::uint32_t origin_seq = 0;
  std::uint32_t rreq_id = 0;
  NodeId dest = 0;
  std::uint32_t dest_seq = 0;
  bool dest_seq_known = false;
  std::uint32_t hop_count = 0;
};

struct Rrep {
  NodeId origin = 0;  // node that asked
  NodeId dest = 0;    // node the route leads to
  std::uint32_t dest_seq = 0;
  std::uint32_t hop_count = 0;
};

struct Rerr {
  std::vector<std::pair<NodeId, std::uint32_t>> unreachable;  // (dest, dest_seq)
};

// Network-layer packet. `src`/`dst` are end-to-end addresses; routing
// control packets are link-local and carry the sender/next hop here.
struct Packet {
  NodeId src = 0;
  NodeId dst = 0;
  std::uint32_t ttl = 64;
  std::uint64_t uid = 0;
  std::variant<tcp::Segment, Rreq, Rrep, Rerr> body;

  bool is_data() const { return std::holds_alternative<tcp::Segment>(body); }
  std::uint32_t size_bytes() const;
};

using PacketPtr = std::shared_ptr<const Packet>;

inline std::uint32_t Packet::size_bytes() const {
  struct Visitor {
    std::uint32_t operator()(const tcp::Segment& s) const { return tcp::wire_bytes(s); }
    std::uint32_t operator()(const Rreq&) const { return 24 + 20; }
    std::uint32_t operator()(const Rrep&) const { return 20 + 20; }
    std::uint32_t operator()(const Rerr& e) const {
      return 4 + 8 * static_cast<std::uint32_t>(e.unreachable.size()) + 20;
    }
  };
  return std::visit(Visitor{}, body);
}

}  // namespace wsn::net
