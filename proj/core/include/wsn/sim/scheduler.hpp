#pragma once

#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "wsn/sim/time.hpp"

namespace wsn::sim {

enum class EventKind : std::uint8_t {
  FrameArrival,
  TimerExpiry,
  MobilityStep,
  AppGenerate,
  RtoExpiry,
};

const char* to_string(EventKind kind);

// Identifier of whatever the event is addressed to (node id or connection id).
using TargetId = std::uint32_t;

struct EventHandle {
  std::uint64_t seq = 0;
  bool valid() const { return seq != 0; }
};

// Metadata of a dispatched event, handed to the dispatch observer.
struct DispatchRecord {
  SimTime fire_at;
  std::uint64_t seq;
  TargetId target;
  EventKind kind;
};

// Deterministic discrete-event engine. Events are totally ordered by
// (fire_at, seq); seq is a per-instance insertion counter, so simultaneous
// events fire in FIFO order.
class Scheduler {
 public:
  using Action = std::function<void()>;
  using Observer = std::function<void(const DispatchRecord&)>;

  SimTime now() const { return now_; }

  // Throws ModelError if fire_at < now().
  EventHandle schedule(SimTime fire_at, EventKind kind, TargetId target, Action action);
  EventHandle schedule_in(SimTime delay, EventKind kind, TargetId target, Action action) {
    return schedule(now_ + delay, kind, target, std::move(action));
  }

  // True iff the event was pending and has now been removed.
  bool cancel(EventHandle handle);
  bool is_pending(EventHandle handle) const { return pending_.contains(handle.seq); }

  // Dispatches every event with fire_at <= t_end, then sets the clock to t_end.
  std::uint64_t run_until(SimTime t_end);

  std::size_t pending_count() const { return pending_.size(); }
  std::uint64_t dispatched_count() const { return dispatched_; }

  void set_observer(Observer observer) { observer_ = std::move(observer); }

 private:
  struct Entry {
    SimTime fire_at;
    std::uint64_t seq;
    TargetId target;
    EventKind kind;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  SimTime now_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t dispatched_ = 0;
  std::vector<Entry> heap_;
  std::unordered_set<std::uint64_t> pending_;
  Observer observer_;
};

}  // namespace wsn::sim
