#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "mobccn/link_layer.hpp"
#include "oracles.hpp"

using namespace mobccn;

namespace {

constexpr double kTen = 10e6;
constexpr std::uint64_t kChunk = 2'000'000;

Transfer data(NodeId from, NodeId to, std::uint64_t bytes, std::uint64_t key = 0) {
  Transfer t;
  t.from = from;
  t.to = to;
  t.size_bytes = bytes;
  t.packet = DataPacket{static_cast<ContentId>(key), bytes, 0, {}};
  t.dedupe_key = key;
  return t;
}

Transfer interest(NodeId from, NodeId to, std::uint64_t key = 0) {
  Transfer t;
  t.from = from;
  t.to = to;
  t.size_bytes = 50;
  t.packet = InterestPacket{};
  t.dedupe_key = key;
  return t;
}

Transfer hello(NodeId from, NodeId to, std::uint32_t bytes = 56) {
  Transfer t;
  t.from = from;
  t.to = to;
  t.size_bytes = bytes;
  HelloPacket h;
  h.sender = from;
  h.size_bytes = bytes;
  t.packet = h;
  return t;
}

}  // namespace

TEST(LinkLayer, SoleContactTakesSizeOverRate) {
  LinkLayer links(2, kTen, Sharing::sender_degree);
  links.contact_up(0, 1, 100);
  links.enqueue(data(0, 1, kChunk));
  links.pump(100);
  EXPECT_DOUBLE_EQ(links.next_completion(), 101.6);
  auto done = links.complete_next(101.6);
  EXPECT_EQ(done.started_at, 100);
  EXPECT_EQ(done.segment_bytes, (std::vector<double>{2e6}));
  EXPECT_EQ(links.next_completion(), std::numeric_limits<double>::infinity());
}

TEST(LinkLayer, InterruptedTransferResumesWithRemainder) {
  LinkLayer links(2, kTen, Sharing::sender_degree);
  links.contact_up(0, 1, 0);
  links.enqueue(data(0, 1, kChunk, 1));
  links.pump(0);
  links.contact_down(0, 1, 1.0);
  EXPECT_EQ(links.next_completion(), std::numeric_limits<double>::infinity());
  ASSERT_TRUE(links.remaining(0, 1));
  EXPECT_DOUBLE_EQ(*links.remaining(0, 1), 750'000);  // 6 Mbit left
  links.contact_up(0, 1, 50);
  links.pump(50);
  EXPECT_DOUBLE_EQ(links.next_completion(), 50.6);
  auto done = links.complete_next(50.6);
  ASSERT_EQ(done.segment_bytes.size(), 2u);
  EXPECT_DOUBLE_EQ(done.segment_bytes[0], 1'250'000);
  EXPECT_NEAR(done.segment_bytes[1], 750'000, 1e-6);
}

TEST(LinkLayer, TwoNeighborsHalveTheRate) {
  LinkLayer links(3, kTen, Sharing::sender_degree);
  links.contact_up(0, 1, 0);
  links.contact_up(0, 2, 0);
  EXPECT_DOUBLE_EQ(links.rate(0, 1), 625'000);  // 5 Mbps
  EXPECT_DOUBLE_EQ(links.rate(1, 0), 1'250'000);
  EXPECT_EQ(links.rate(1, 2), 0);
}

TEST(LinkLayer, CliqueSharesWithBothEndpoints) {
  LinkLayer links(4, kTen, Sharing::clique);
  links.contact_up(0, 1, 0);
  links.contact_up(1, 2, 0);
  links.contact_up(1, 3, 0);
  EXPECT_DOUBLE_EQ(links.rate(0, 1), 1.25e6 / 3);
  EXPECT_DOUBLE_EQ(links.rate(1, 0), 1.25e6 / 3);
  links.contact_down(1, 3, 5);
  EXPECT_DOUBLE_EQ(links.rate(0, 1), 1.25e6 / 2);
}

TEST(LinkLayer, ThirdNodeJoiningMatchesFluidOracle) {
  // 0 sends 2 MB to 1; at 0.5 s node 2 meets 0 and the rate halves.
  oracle::FluidCase fc;
  fc.n_nodes = 3;
  fc.bandwidth_bps = kTen;
  fc.enqueue_ms = 0;
  fc.packet_bytes = {kChunk};
  fc.contacts = {{0, 1, 0, 10'000}, {0, 2, 500, 9'000}};
  auto want = oracle::fluid_oracle(fc);
  auto got = oracle::run_link_layer(fc);
  // 625 kB at full rate, the remaining 1.375 MB at half rate: 0.5 + 2.2 s.
  ASSERT_TRUE(want[0].completed_at && got[0].completed_at);
  EXPECT_NEAR(*want[0].completed_at, 2.7, 1e-3);
  EXPECT_NEAR(*got[0].completed_at, 2.7, 1e-9);
}

TEST(LinkLayer, ContactEndCancelsCompletion) {
  LinkLayer links(2, kTen, Sharing::sender_degree);
  links.contact_up(0, 1, 0);
  links.enqueue(data(0, 1, kChunk));
  links.pump(0);
  links.contact_down(0, 1, 1.5);
  EXPECT_EQ(links.next_completion(), std::numeric_limits<double>::infinity());
  EXPECT_EQ(links.backlog(0, 1), 1u);
}

TEST(LinkLayer, DataBeforeInterestBeforeHello) {
  LinkLayer links(2, kTen, Sharing::sender_degree);
  links.contact_up(0, 1, 0);
  links.enqueue(hello(0, 1));
  links.enqueue(interest(0, 1, 7));
  links.enqueue(data(0, 1, 1000, 8));
  links.pump(0);
  std::vector<PacketKind> order;
  while (links.next_completion() < std::numeric_limits<double>::infinity()) {
    Seconds t = links.next_completion();
    order.push_back(kind_of(links.complete_next(t).transfer.packet));
    links.pump(t);
  }
  EXPECT_EQ(order, (std::vector<PacketKind>{PacketKind::data, PacketKind::interest,
                                            PacketKind::hello}));
}

TEST(LinkLayer, DedupeKeyRejectsSecondCopy) {
  LinkLayer links(2, kTen, Sharing::sender_degree);
  links.contact_up(0, 1, 0);
  EXPECT_TRUE(links.enqueue(data(0, 1, 10, 5)));
  EXPECT_FALSE(links.enqueue(data(0, 1, 10, 5)));
  EXPECT_TRUE(links.enqueue(data(1, 0, 10, 5)));  // other direction
  EXPECT_TRUE(links.enqueue(hello(0, 1)));
  EXPECT_TRUE(links.enqueue(hello(0, 1)));  // key 0 never dedupes
  links.pump(0);
  auto done = links.complete_next(links.next_completion());
  links.pump(done.completed_at);
  EXPECT_TRUE(links.enqueue(data(0, 1, 10, 5)));  // free again once delivered
}

TEST(LinkLayer, HellosDieWithTheContact) {
  LinkLayer links(2, kTen, Sharing::sender_degree);
  links.contact_up(0, 1, 0);
  links.enqueue(data(0, 1, kChunk, 1));
  links.enqueue(hello(0, 1));
  links.enqueue(hello(0, 1));
  links.pump(0);
  EXPECT_EQ(links.backlog(0, 1), 3u);
  links.contact_down(0, 1, 1);
  EXPECT_EQ(links.backlog(0, 1), 1u);

  // A Hello cut off mid-flight is gone too.
  links.contact_up(0, 1, 2);
  links.pump(2);
  auto done = links.complete_next(links.next_completion());
  links.enqueue(hello(0, 1, 1'000'000));
  links.pump(done.completed_at);
  links.contact_down(0, 1, done.completed_at + 0.1);
  EXPECT_EQ(links.backlog(0, 1), 0u);
}

TEST(LinkLayer, UselessTransfersAreSkippedAtStart) {
  LinkLayer links(2, kTen, Sharing::sender_degree);
  links.set_useful_check([](const Transfer& t) { return t.size_bytes != 999; });
  links.contact_up(0, 1, 0);
  links.enqueue(data(0, 1, 999, 1));
  links.enqueue(data(0, 1, 1000, 2));
  links.pump(0);
  auto done = links.complete_next(links.next_completion());
  EXPECT_EQ(done.transfer.size_bytes, 1000u);
  EXPECT_EQ(links.backlog(0, 1), 0u);
}

TEST(LinkLayer, RejectsBadInput) {
  EXPECT_THROW(LinkLayer(2, 0, Sharing::sender_degree), std::invalid_argument);
  LinkLayer links(2, kTen, Sharing::sender_degree);
  EXPECT_THROW(links.enqueue(data(0, 1, 10)), std::logic_error);
}

// Byte conservation and completion times against the 1 ms brute-force model.
TEST(LinkLayer, FluidOracleOnRandomCases) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto fc = oracle::random_fluid_case(rng);
    auto want = oracle::fluid_oracle(fc);
    auto got = oracle::run_link_layer(fc);
    ASSERT_EQ(want.size(), got.size());
    for (std::size_t p = 0; p < want.size(); ++p) {
      ASSERT_EQ(want[p].completed_at.has_value(), got[p].completed_at.has_value())
          << "trial " << trial << " packet " << p;
      if (!got[p].completed_at) continue;
      EXPECT_NEAR(*got[p].completed_at, *want[p].completed_at, 1e-3) << "trial " << trial;
      double sum = std::accumulate(got[p].segment_bytes.begin(), got[p].segment_bytes.end(), 0.0);
      EXPECT_NEAR(sum, static_cast<double>(fc.packet_bytes[p]), 1.0);
      ASSERT_EQ(want[p].segment_bytes.size(), got[p].segment_bytes.size()) << "trial " << trial;
      for (std::size_t s = 0; s < want[p].segment_bytes.size(); ++s)
        EXPECT_NEAR(got[p].segment_bytes[s], want[p].segment_bytes[s], 1.0) << "trial " << trial;
    }
  }
}
