#include <gtest/gtest.h>

#include "wsn/tcp/receiver.hpp"

namespace {

using wsn::tcp::Receiver;

TEST(TcpReceiver, InOrderSegmentAcksSeqPlusPayload) {
  Receiver r;
  const auto res = r.on_segment(0, 512);
  EXPECT_EQ(res.ack, 512u);
  EXPECT_FALSE(res.duplicate_ack);
  EXPECT_EQ(res.delivered.first, 0u);
  EXPECT_EQ(res.delivered.second, 512u);
}

TEST(TcpReceiver, GapThenFillJumpsOverBufferedRange) {
  Receiver r;
  const auto gap = r.on_segment(512, 512);
  EXPECT_EQ(gap.ack, 0u);
  EXPECT_TRUE(gap.duplicate_ack);
  EXPECT_EQ(gap.delivered.second, gap.delivered.first);
  const auto fill = r.on_segment(0, 512);
  EXPECT_EQ(fill.ack, 1024u);
  EXPECT_EQ(fill.delivered.first, 0u);
  EXPECT_EQ(fill.delivered.second, 1024u);
  EXPECT_EQ(r.out_of_order_count(), 0u);
}

TEST(TcpReceiver, DuplicateDataGivesDuplicateAckAndNoRedelivery) {
  Receiver r;
  r.on_segment(0, 512);
  const auto dup = r.on_segment(0, 512);
  EXPECT_EQ(dup.ack, 512u);
  EXPECT_TRUE(dup.duplicate_ack);
  EXPECT_EQ(dup.delivered.second, dup.delivered.first);
}

TEST(TcpReceiver, OverlappingRetransmissionDeliversOnlyNewBytes) {
  Receiver r;
  r.on_segment(0, 512);
  const auto res = r.on_segment(0, 1024);
  EXPECT_EQ(res.ack, 1024u);
  EXPECT_EQ(res.delivered.first, 512u);
  EXPECT_EQ(res.delivered.second, 1024u);
}

}  // namespace
