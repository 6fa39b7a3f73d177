#include <gtest/gtest.h>

#include <functional>
#include <vector>

#include "wsn/error.hpp"
#include "wsn/sim/scheduler.hpp"

namespace {

using wsn::ModelError;
using wsn::sim::DispatchRecord;
using wsn::sim::EventKind;
using wsn::sim::Scheduler;
using wsn::sim::SimTime;

SimTime s(double seconds) { return SimTime::from_seconds(seconds); }

TEST(Scheduler, EventPopsAtItsFireTime) {
  Scheduler sched;
  sched.run_until(s(1.0));
  SimTime seen;
  sched.schedule(s(5.0), EventKind::TimerExpiry, 0, [&] { seen = sched.now(); });
  EXPECT_EQ(sched.run_until(s(10.0)), 1u);
  EXPECT_EQ(seen, s(5.0));
  EXPECT_EQ(sched.now(), s(10.0));
}

TEST(Scheduler, SimultaneousEventsFireInInsertionOrder) {
  Scheduler sched;
  std::vector<int> order;
  for (int i = 0; i < 5; ++i) {
    sched.schedule(s(2.0), EventKind::TimerExpiry, 0, [&order, i] { order.push_back(i); });
  }
  sched.run_until(s(2.0));
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Scheduler, SchedulingInThePastFailsLoudly) {
  Scheduler sched;
  sched.run_until(s(1.0));
  EXPECT_THROW(sched.schedule(s(0.5), EventKind::TimerExpiry, 0, [] {}), ModelError);
}

TEST(Scheduler, CancelPendingThenTwiceThenAfterFire) {
  Scheduler sched;
  bool fired = false;
  auto pending = sched.schedule(s(1.0), EventKind::RtoExpiry, 3, [&] { fired = true; });
  EXPECT_TRUE(sched.cancel(pending));
  EXPECT_FALSE(sched.cancel(pending));
  auto later = sched.schedule(s(2.0), EventKind::RtoExpiry, 3, [] {});
  sched.run_until(s(5.0));
  EXPECT_FALSE(fired);
  EXPECT_FALSE(sched.cancel(later));
}

TEST(Scheduler, EmptyQueueAdvancesClock) {
  Scheduler sched;
  EXPECT_EQ(sched.run_until(s(10.0)), 0u);
  EXPECT_EQ(sched.now(), s(10.0));
}

TEST(Scheduler, RunUntilStopsAtTheBoundary) {
  Scheduler sched;
  for (double t : {1.0, 2.0, 3.0}) sched.schedule(s(t), EventKind::TimerExpiry, 0, [] {});
  EXPECT_EQ(sched.run_until(s(2.0)), 2u);
  EXPECT_EQ(sched.pending_count(), 1u);
}

TEST(Scheduler, ChildEventScheduledDuringDispatchFiresInOrder) {
  Scheduler sched;
  std::vector<double> fired;
  sched.schedule(s(1.0), EventKind::TimerExpiry, 0, [&] {
    fired.push_back(sched.now().seconds());
    sched.schedule(s(1.5), EventKind::TimerExpiry, 0, [&] { fired.push_back(sched.now().seconds()); });
  });
  sched.schedule(s(2.0), EventKind::TimerExpiry, 0, [&] { fired.push_back(sched.now().seconds()); });
  sched.run_until(s(2.0));
  EXPECT_EQ(fired, (std::vector<double>{1.0, 1.5, 2.0}));
}

TEST(Scheduler, RunUntilIntoThePastIsAnError) {
  Scheduler sched;
  sched.run_until(s(3.0));
  EXPECT_THROW(sched.run_until(s(2.0)), ModelError);
}

TEST(Scheduler, ObserverSeesNonDecreasingTimesAndNoCancelledEvents) {
  Scheduler sched;
  std::vector<DispatchRecord> log;
  sched.set_observer([&](const DispatchRecord& r) { log.push_back(r); });
  std::vector<wsn::sim::EventHandle> handles;
  // A pseudo-random mix of times, with every third event cancelled.
  std::uint64_t x = 12345;
  for (int i = 0; i < 300; ++i) {
    x = x * 6364136223846793005ull + 1442695040888963407ull;
    handles.push_back(sched.schedule(SimTime::from_ns(static_cast<std::int64_t>(x >> 40)),
                                     EventKind::FrameArrival, static_cast<std::uint32_t>(i),
                                     [] {}));
  }
  for (std::size_t i = 0; i < handles.size(); i += 3) sched.cancel(handles[i]);
  sched.run_until(s(100.0));
  ASSERT_EQ(log.size(), 200u);
  for (std::size_t i = 1; i < log.size(); ++i) {
    const bool ordered = log[i - 1].fire_at < log[i].fire_at ||
                         (log[i - 1].fire_at == log[i].fire_at && log[i - 1].seq < log[i].seq);
    EXPECT_TRUE(ordered) << "at " << i;
  }
  for (const DispatchRecord& r : log) EXPECT_NE(r.target % 3, 0u);
}

TEST(Scheduler, ReplayYieldsIdenticalDispatchLog) {
  auto run = [] {
    Scheduler sched;
    std::vector<std::pair<std::int64_t, std::uint64_t>> log;
    sched.set_observer([&](const DispatchRecord& r) { log.emplace_back(r.fire_at.ns(), r.seq); });
    std::function<void(int)> spawn = [&](int depth) {
      if (depth == 0) return;
      for (int k = 1; k <= 2; ++k) {
        sched.schedule_in(SimTime::from_us(depth * 10 + k), EventKind::TimerExpiry, 0,
                          [&, depth] { spawn(depth - 1); });
      }
    };
    spawn(8);
    sched.run_until(s(1.0));
    return log;
  };
  const auto a = run();
  EXPECT_EQ(a.size(), 510u);
  EXPECT_EQ(a, run());
}

}  // namespace
