#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "helpers.hpp"
#include "mobccn/mobccn.hpp"
#include "mobccn/tables.hpp"

using namespace mobccn;
using namespace testing_helpers;

namespace {

InterestPacket interest(ContentId c, RequestId r = 0) {
  InterestPacket i;
  i.content = c;
  i.request_id = r;
  return i;
}

std::vector<Face> faces_of(const PitEntry& e) {
  std::vector<Face> out;
  for (const auto& f : e.faces) out.push_back(f.face);
  return out;
}

}  // namespace

TEST(ContentCatalog, CountsAndOrder) {
  ContentCatalog cat({4, 1, 9}, 4, 5);
  EXPECT_EQ(cat.size(), 3u * 4 * 5);
  ContentName prev{-1, 0, 0};
  for (ContentId id = 0; id < cat.size(); ++id) {
    ContentName n = cat.name_of(id);
    EXPECT_LT(prev, n);
    EXPECT_EQ(cat.id_of(n), id);
    EXPECT_EQ(cat.holder(id), n.producer);
    prev = n;
  }
  EXPECT_FALSE(cat.find(ContentName{2, 0, 0}));
  EXPECT_FALSE(cat.find(ContentName{4, 4, 0}));
  EXPECT_THROW(cat.id_of(ContentName{4, 0, 5}), std::out_of_range);
  EXPECT_EQ(cat.contents_of(4).size(), 20u);
  EXPECT_EQ((ContentName{0, 1, 2}.to_string()), "/p0/t1/c2");
}

TEST(Pit, CreateThenAggregate) {
  Pit pit;
  auto r1 = pit.upsert(interest(3, 10), 7, 1.0);
  EXPECT_EQ(r1.kind, PitUpsert::created);
  EXPECT_EQ(r1.arrival_count, 1u);

  auto r2 = pit.upsert(interest(3, 11), 9, 2.0);
  EXPECT_EQ(r2.kind, PitUpsert::aggregated);
  EXPECT_EQ(r2.arrival_count, 2u);
  EXPECT_EQ(faces_of(*pit.find(3)), (std::vector<Face>{7, 9}));

  auto r3 = pit.upsert(interest(3, 10), 7, 3.0);
  EXPECT_EQ(r3.kind, PitUpsert::aggregated);
  EXPECT_EQ(r3.arrival_count, 3u);
  EXPECT_EQ(faces_of(*pit.find(3)), (std::vector<Face>{7, 9}));
  EXPECT_EQ(pit.find(3)->first_interest.request_id, 10u);
  EXPECT_EQ(pit.find(3)->duplicates(), 2u);
}

// Brute-force model of one entry: the arrival count is the sequence length
// and the faces are its distinct elements in first-seen order.
TEST(Pit, ArrivalSequencesMatchEnumeration) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> face(-1, 4);
  std::uniform_int_distribution<int> len(1, 12);
  for (int trial = 0; trial < 500; ++trial) {
    Pit pit;
    std::vector<Face> seq(static_cast<std::size_t>(len(rng)));
    for (auto& f : seq) f = face(rng);
    std::uint32_t last = 0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      auto r = pit.upsert(interest(0, static_cast<RequestId>(k)), seq[k], static_cast<double>(k));
      EXPECT_EQ(r.kind, k == 0 ? PitUpsert::created : PitUpsert::aggregated);
      EXPECT_GE(r.arrival_count, last);  // monotone
      last = r.arrival_count;
    }
    std::vector<Face> distinct;
    for (Face f : seq)
      if (std::find(distinct.begin(), distinct.end(), f) == distinct.end()) distinct.push_back(f);
    const PitEntry& e = *pit.find(0);
    EXPECT_EQ(e.arrival_count, seq.size());
    EXPECT_EQ(faces_of(e), distinct);
    EXPECT_GE(e.arrival_count, e.faces.size());
  }
}

TEST(Pit, PerFaceRequestIds) {
  Pit pit;
  pit.upsert(interest(1, 5), 7, 0);
  pit.upsert(interest(1, 6), 7, 1);
  pit.upsert(interest(1, 6), 7, 2);
  EXPECT_EQ(pit.find(1)->faces[0].request_ids, (std::vector<RequestId>{5, 6}));
}

TEST(PitSatisfy, MovesFacesIntoContentStore) {
  Pit pit;
  ContentStore cs;
  pit.upsert(interest(2, 1), 7, 0);
  pit.upsert(interest(2, 2), 9, 0);
  DataPacket d{2, 1000, 3, {}};
  auto owed = pit_satisfy(pit, cs, d, 5.0);
  ASSERT_EQ(owed.size(), 2u);
  EXPECT_EQ(owed[0].face, 7);
  EXPECT_EQ(owed[0].request_ids, (std::vector<RequestId>{1}));
  EXPECT_EQ(owed[1].face, 9);
  EXPECT_EQ(owed[1].request_ids, (std::vector<RequestId>{2}));
  EXPECT_EQ(pit.find(2), nullptr);
  ASSERT_NE(cs.find(2), nullptr);
  EXPECT_TRUE(cs.find(2)->owes(7));
  EXPECT_TRUE(cs.find(2)->owes(9));
  EXPECT_EQ(cs.find(2)->acquired_at, 5.0);
}

TEST(PitSatisfy, UnsolicitedDataLeavesNothing) {
  Pit pit;
  ContentStore cs;
  auto owed = pit_satisfy(pit, cs, DataPacket{4, 10, 0, {}}, 1.0);
  EXPECT_TRUE(owed.empty());
  EXPECT_EQ(cs.find(4), nullptr);
  EXPECT_TRUE(cs.empty());
}

TEST(PitSatisfy, LocalAppFaceIsDeliveredEndToEnd) {
  // 0 requests content held by 1 after two meetings taught it a route.
  auto trace = make_trace(2, {{0, 1, 0, 5}, {0, 1, 20, 25}, {0, 1, 100, 200}});
  auto w = make_workload({1}, 1, {{0, 0, 50}});
  auto rec = run_recorded(trace, w, protocol(Variant::basic), SimConfig{});
  ASSERT_EQ(rec.ledger.satisfactions().size(), 1u);
  EXPECT_EQ(rec.ledger.satisfactions()[0].time, 100);
}

TEST(ContentStore, MarkServed) {
  ContentStore cs;
  cs.insert(DataPacket{1, 10, 0, {}}, {PitFace{7, 0, {1}}, PitFace{9, 0, {2}}}, 0);
  EXPECT_EQ(cs.mark_served(1, 7), ServeResult::still_pending);
  EXPECT_FALSE(cs.find(1)->owes(7));
  EXPECT_TRUE(cs.find(1)->owes(9));
  EXPECT_EQ(cs.mark_served(1, 9), ServeResult::evicted);
  EXPECT_EQ(cs.find(1), nullptr);
}

TEST(ContentStore, ServingUnknownFaceWarns) {
  ContentStore cs;
  cs.insert(DataPacket{1, 10, 0, {}}, {PitFace{7, 0, {1}}}, 0);
  EXPECT_EQ(cs.mark_served(1, 3), ServeResult::not_found);
  EXPECT_EQ(cs.mark_served(5, 7), ServeResult::not_found);
  EXPECT_EQ(cs.warnings(), 2u);
  EXPECT_TRUE(cs.find(1)->owes(7));
}

TEST(ContentStore, InsertWithoutFacesKeepsNothing) {
  ContentStore cs;
  cs.insert(DataPacket{1, 10, 0, {}}, {}, 0);
  EXPECT_TRUE(cs.empty());
}

TEST(ContentStore, OwedAndInFlight) {
  ContentStore cs;
  cs.insert(DataPacket{1, 10, 0, {}}, {PitFace{7, 0, {1}}}, 0);
  cs.insert(DataPacket{0, 10, 0, {}}, {PitFace{7, 0, {2}}, PitFace{8, 0, {3}}}, 0);
  EXPECT_EQ(cs.owed_to(7), (std::vector<ContentId>{0, 1}));
  EXPECT_TRUE(cs.mark_in_flight(1, 7));
  EXPECT_FALSE(cs.mark_in_flight(1, 7));
  EXPECT_FALSE(cs.mark_in_flight(1, 8));
  EXPECT_EQ(cs.owed_to(7), (std::vector<ContentId>{0}));
}

TEST(Fib, HelloInstallsAndOverwritesRoutes) {
  Fib fib(10);
  HelloPacket h = make_hello(4, {{1, 0.1, 4}, {2, 0.2, 4}, {3, 0.3, 4}}, PacketSizes{});
  EXPECT_EQ(fib.apply_hello(h, std::vector<double>{0.01, 0.02, 0.03}, 1.0), 3u);
  for (ContentId c : {1u, 2u, 3u}) {
    ASSERT_EQ(fib.routes(c).size(), 1u);
    EXPECT_EQ(fib.routes(c)[0].via, 4);
  }
  EXPECT_EQ(fib.apply_hello(h, std::vector<double>{0.05, 0.06, 0.07}, 2.0), 3u);
  EXPECT_EQ(fib.routes(1).size(), 1u);
  EXPECT_DOUBLE_EQ(fib.routes(1)[0].utility, 0.05);
  EXPECT_EQ(fib.routes(1)[0].learned_at, 2.0);
}

TEST(Fib, ZeroUtilityRouteKeptButNeverSelected) {
  Fib fib(3);
  CnuTable cnu(3);
  fib.update(0, 4, 0.0, 1.0);
  EXPECT_TRUE(fib.has_entry(0));
  EXPECT_EQ(fib.routes(0)[0].utility, 0.0);
  EXPECT_FALSE(select_best_forwarder(fib, cnu, 0));
}

TEST(Fib, RejectsNegativeUtility) {
  Fib fib(3);
  EXPECT_THROW(fib.update(0, 1, -0.1, 0), std::invalid_argument);
  EXPECT_FALSE(fib.has_entry(0));
}

TEST(Cnu, EntriesLiveOnlyWhileNeighbor) {
  CnuTable cnu(4);
  cnu.set(3, 1, 0.5);
  cnu.set(3, 2, 0.25);
  cnu.set(5, 1, 0.125);
  EXPECT_EQ(cnu.get(3, 1), 0.5);
  EXPECT_FALSE(cnu.get(3, 0));
  cnu.remove_neighbor(3);
  EXPECT_FALSE(cnu.get(3, 1));
  EXPECT_EQ(cnu.neighbors(), 1u);
  cnu.remove_neighbor(5);
  EXPECT_TRUE(cnu.empty());
}

TEST(DataStore, HoldsOwnedContents) {
  DataStore ds(5);
  ds.add(3);
  ds.add(1);
  EXPECT_TRUE(ds.holds(3));
  EXPECT_FALSE(ds.holds(0));
  EXPECT_FALSE(ds.holds(99));
  EXPECT_EQ(ds.owned(), (std::vector<ContentId>{1, 3}));
}

// Whole-run invariants of the tables, on generated community traces.
class TableInvariants : public ::testing::TestWithParam<Variant> {};

TEST_P(TableInvariants, HoldAfterRun) {
  TraceConfig tc;
  tc.n_nodes = 24;
  tc.duration_s = 40000;
  tc.seed = 3;
  auto trace = clip_trace(generate_trace(tc), 39000);  // every contact over before the end
  WorkloadConfig wc;
  wc.req_start_s = 5000;
  wc.req_end_s = 30000;
  wc.requests_per_consumer = 10;
  wc.consumers_per_community = 2;
  auto w = build_workload(wc, trace.nodes, 3);
  SimConfig cfg;
  cfg.duration_s = 40000;
  Simulator sim(trace, w, protocol(GetParam()), cfg, 3);
  sim.run();
  const auto& s = dynamic_cast<const MobCcnStrategy&>(sim.strategy());
  for (std::size_t n = 0; n < trace.n_nodes(); ++n) {
    const NodeState& st = s.node(static_cast<NodeId>(n));
    EXPECT_TRUE(st.cnu.empty()) << "node " << n;
    for (ContentId c = 0; c < st.fib.contents(); ++c)
      for (const auto& r : st.fib.routes(c)) EXPECT_GE(r.utility, 0.0);
    for (const auto& [c, e] : st.pit) {
      EXPECT_FALSE(e.faces.empty());
      EXPECT_GE(e.arrival_count, e.faces.size());
    }
  }
}

INSTANTIATE_TEST_SUITE_P(MobCcn, TableInvariants,
                         ::testing::Values(Variant::basic, Variant::r1, Variant::r2, Variant::a,
                                           Variant::ah));

// Every face a CS entry still owes was a face of the PIT entry it came from,
// and the Data hop count matches the Interest copy that reached the holder.
TEST(TableInvariants, ContentStoreFacesAndReversePathSymmetry) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    TraceConfig tc;
    tc.n_nodes = 18;
    tc.duration_s = 30000;
    tc.seed = seed;
    auto trace = generate_trace(tc);
    WorkloadConfig wc;
    wc.req_start_s = 3000;
    wc.req_end_s = 20000;
    wc.requests_per_consumer = 8;
    wc.consumers_per_community = 1;
    auto w = build_workload(wc, trace.nodes, seed);
    // One request per content, so no Interest is ever aggregated.
    std::set<ContentId> seen;
    std::erase_if(w.requests, [&](const Request& r) { return !seen.insert(r.content).second; });
    for (std::size_t i = 0; i < w.requests.size(); ++i) w.requests[i].id = static_cast<RequestId>(i);

    SimConfig cfg;
    cfg.duration_s = 30000;
    auto rec = run_recorded(trace, w, protocol(Variant::basic), cfg, seed);
    std::map<ContentId, std::uint32_t> hop_at_holder;
    for (const auto& o : rec.transfers) {
      auto* i = std::get_if<InterestPacket>(&o.transfer.packet);
      if (i && w.catalog.holder(i->content) == o.transfer.to) hop_at_holder[i->content] = i->hop_count + 1;
    }
    for (const auto& s : rec.ledger.satisfactions()) {
      ContentId c = w.requests[s.request].content;
      ASSERT_TRUE(hop_at_holder.count(c));
      EXPECT_EQ(s.hop_count, hop_at_holder[c]);
    }
  }
}

TEST(TableInvariants, OwedFacesComeFromThePit) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    Pit pit;
    ContentStore cs;
    std::uniform_int_distribution<int> face(-1, 6);
    std::set<Face> pit_faces;
    int n = 1 + trial % 7;
    for (int k = 0; k < n; ++k) {
      Face f = face(rng);
      pit.upsert(interest(0, static_cast<RequestId>(k)), f, 0);
      pit_faces.insert(f);
    }
    pit_satisfy(pit, cs, DataPacket{0, 1, 0, {}}, 1);
    for (Face f = -1; f <= 6; ++f) {
      if (rng() % 2) cs.mark_served(0, f);
      if (const CsEntry* e = cs.find(0))
        for (const auto& p : e->pending) EXPECT_TRUE(pit_faces.count(p.face));
    }
  }
}
