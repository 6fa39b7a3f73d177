#include "wsn/tcp/receiver.hpp"

#include <algorithm>

namespace wsn::tcp {

Receiver::Result Receiver::on_segment(std::uint64_t seq, std::uint32_t len) {
  Result result;
  const std::uint64_t end = seq + len;
  const std::uint64_t before = rcv_nxt_;
  if (end <= rcv_nxt_ || len == 0) {
    result.ack = rcv_nxt_;
    result.duplicate_ack = true;
    return result;
  }
  if (seq > rcv_nxt_) {
    auto& stored = out_of_order_[seq];
    stored = std::max(stored, end);
    result.ack = rcv_nxt_;
    result.duplicate_ack = true;
    return result;
  }
  rcv_nxt_ = end;
  // Pull in any buffered ranges the new data made contiguous.
  auto it = out_of_order_.begin();
  while (it != out_of_order_.end() && it->first <= rcv_nxt_) {
    rcv_nxt_ = std::max(rcv_nxt_, it->second);
    it = out_of_order_.erase(it);
  }
  result.ack = rcv_nxt_;
  result.delivered = {before, rcv_nxt_};
  return result;
}

}  // namespace wsn::tcp
