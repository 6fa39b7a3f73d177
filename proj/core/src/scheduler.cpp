#include "wsn/sim/scheduler.hpp"

#include <algorithm>
#include <sstream>

#include "wsn/error.hpp"

namespace wsn::sim {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::FrameArrival: return "frame-arrival";
    case EventKind::TimerExpiry: return "timer-expiry";
    case EventKind::MobilityStep: return "mobility-step";
    case EventKind::AppGenerate: return "app-generate";
    case EventKind::RtoExpiry: return "rto-expiry";
  }
  return "unknown";
}

EventHandle Scheduler::schedule(SimTime fire_at, EventKind kind, TargetId target,
                                Action action) {
  if (fire_at < now_) {
    std::ostringstream msg;
    msg << "event " << to_string(kind) << " scheduled at " << fire_at
        << " but the clock is already at " << now_;
    throw ModelError(msg.str());
  }
  const std::uint64_t seq = next_seq_++;
  heap_.push_back(Entry{fire_at, seq, target, kind, std::move(action)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  pending_.insert(seq);
  return EventHandle{seq};
}

bool Scheduler::cancel(EventHandle handle) {
  // Lazy deletion: the heap entry stays until popped and is skipped then.
  return pending_.erase(handle.seq) > 0;
}

std::uint64_t Scheduler::run_until(SimTime t_end) {
  if (t_end < now_) throw ModelError("run_until target lies in the past");
  std::uint64_t processed = 0;
  while (!heap_.empty() && heap_.front().fire_at <= t_end) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Entry entry = std::move(heap_.back());
    heap_.pop_back();
    if (pending_.erase(entry.seq) == 0) continue;  // cancelled
    now_ = entry.fire_at;
    ++processed;
    ++dispatched_;
    if (observer_) observer_(DispatchRecord{entry.fire_at, entry.seq, entry.target, entry.kind});
    entry.action();
  }
  now_ = t_end;
  return processed;
}

}  // namespace wsn::sim
