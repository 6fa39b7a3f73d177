#include "wsn/app/message.hpp"

#include "wsn/error.hpp"

namespace wsn::app {

void MessageStream::push(const Message& m) {
  if (m.size_bytes == 0) throw ModelError("message with zero size");
  write_offset_ += m.size_bytes;
  pending_.push_back(Entry{write_offset_, m});
}

std::vector<Message> MessageStream::complete(std::uint64_t delivered_end) {
  if (delivered_end > write_offset_) throw ModelError("delivered past the written stream");
  std::vector<Message> out;
  while (!pending_.empty() && pending_.front().end <= delivered_end) {
    out.push_back(std::move(pending_.front().message));
    pending_.pop_front();
  }
  return out;
}

std::vector<Message> MessageStream::reset() {
  std::vector<Message> lost;
  lost.reserve(pending_.size());
  for (auto& e : pending_) lost.push_back(std::move(e.message));
  pending_.clear();
  write_offset_ = 0;
  return lost;
}

}  // namespace wsn::app
