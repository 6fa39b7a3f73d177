#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace wsn::tcp {

// Receiving half of a connection: reassembles the byte stream and produces
// the cumulative acknowledgment to send back for every arriving segment.
class Receiver {
 public:
  struct Result {
    std::uint64_t ack = 0;
    // Newly in-order byte range [first, second) handed to the application.
    std::pair<std::uint64_t, std::uint64_t> delivered{0, 0};
    bool duplicate_ack = false;
  };

  Result on_segment(std::uint64_t seq, std::uint32_t len);

  std::uint64_t rcv_nxt() const { return rcv_nxt_; }
  std::size_t out_of_order_count() const { return out_of_order_.size(); }
  void reset() {
    rcv_nxt_ = 0;
    out_of_order_.clear();
  }

 private:
  std::uint64_t rcv_nxt_ = 0;
  std::map<std::uint64_t, std::uint64_t> out_of_order_;  // start -> end
};

}  // namespace wsn::tcp
