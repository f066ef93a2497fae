#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <set>

#include "mobccn/trace.hpp"
#include "mobccn/workload.hpp"

using namespace mobccn;

namespace {

std::vector<NodeMeta> default_meta() {
  // 60 nodes, 3 communities of 20, the first member of each a traveller.
  std::vector<NodeMeta> m(60);
  for (int v = 0; v < 60; ++v) m[static_cast<std::size_t>(v)] = NodeMeta{v / 20, v % 20 == 0};
  return m;
}

}  // namespace

TEST(Workload, DefaultCounts) {
  auto meta = default_meta();
  auto w = build_workload(WorkloadConfig{}, meta, 1);
  ASSERT_EQ(w.requests.size(), 480u);
  EXPECT_EQ(w.consumers.size(), 12u);
  EXPECT_EQ(w.producers.size(), 6u);
  EXPECT_EQ(w.catalog.size(), 120u);
  std::size_t local = 0;
  for (const auto& r : w.requests) local += r.local;
  EXPECT_EQ(local, 240u);

  std::map<NodeId, std::map<int, int>> from;  // consumer -> producer community -> count
  for (const auto& r : w.requests)
    ++from[r.consumer][meta[static_cast<std::size_t>(w.catalog.holder(r.content))].community];
  for (auto& [c, by] : from) {
    int home = meta[static_cast<std::size_t>(c)].community;
    EXPECT_EQ(by[home], 20);
    for (int k = 0; k < 3; ++k)
      if (k != home) EXPECT_EQ(by[k], 10);
  }
}

TEST(Workload, RolesAreDisjointNonTravellers) {
  auto meta = default_meta();
  auto w = build_workload(WorkloadConfig{}, meta, 2);
  std::set<NodeId> p(w.producers.begin(), w.producers.end());
  for (NodeId c : w.consumers) EXPECT_FALSE(p.count(c));
  for (NodeId v : w.producers) EXPECT_FALSE(meta[static_cast<std::size_t>(v)].traveller);
  for (NodeId v : w.consumers) EXPECT_FALSE(meta[static_cast<std::size_t>(v)].traveller);
  std::map<int, int> per_comm;
  for (NodeId v : w.producers) ++per_comm[meta[static_cast<std::size_t>(v)].community];
  for (int k = 0; k < 3; ++k) EXPECT_EQ(per_comm[k], 2);
}

TEST(Workload, IdenticalSetSharesEightyNames) {
  auto meta = default_meta();
  WorkloadConfig cfg;
  cfg.consumers_per_community = 16;
  cfg.requests_per_consumer = 80;
  cfg.overlap_mode = OverlapMode::identical_set;
  auto w = build_workload(cfg, meta, 3);
  std::map<NodeId, std::set<ContentId>> names;
  for (const auto& r : w.requests) names[r.consumer].insert(r.content);
  ASSERT_EQ(names.size(), 48u);
  std::map<int, std::set<ContentId>> of_comm;
  for (auto& [c, set] : names) {
    EXPECT_EQ(set.size(), 80u);
    int k = meta[static_cast<std::size_t>(c)].community;
    if (of_comm.count(k))
      EXPECT_EQ(set, of_comm[k]);
    else
      of_comm[k] = set;
  }
}

TEST(Workload, MeanGapNearRate) {
  auto meta = default_meta();
  WorkloadConfig cfg;
  cfg.consumers_per_community = 16;
  cfg.requests_per_consumer = 20;
  cfg.local_fraction = 0.5;
  double sum = 0;
  int n = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto w = build_workload(cfg, meta, seed);
    std::map<NodeId, Seconds> last;
    for (const auto& r : w.requests) {
      auto [it, fresh] = last.try_emplace(r.consumer, cfg.req_start_s);
      sum += r.issue_s - it->second;
      it->second = r.issue_s;
      ++n;
    }
  }
  EXPECT_NEAR(sum / n, 900, 90);
}

TEST(Workload, TimesInsideWindowAndSorted) {
  auto meta = default_meta();
  WorkloadConfig cfg;
  cfg.requests_per_consumer = 80;  // more than the window holds on average
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto w = build_workload(cfg, meta, seed);
    for (std::size_t i = 0; i < w.requests.size(); ++i) {
      const auto& r = w.requests[i];
      EXPECT_EQ(r.id, i);
      EXPECT_GE(r.issue_s, cfg.req_start_s);
      EXPECT_LT(r.issue_s, cfg.req_end_s);
      if (i > 0) EXPECT_LE(w.requests[i - 1].issue_s, r.issue_s);
    }
  }
}

TEST(Workload, ClassificationMatchesCommunities) {
  auto meta = default_meta();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto w = build_workload(WorkloadConfig{}, meta, seed);
    for (const auto& r : w.requests) {
      NodeId holder = w.catalog.holder(r.content);
      EXPECT_EQ(r.local, meta[static_cast<std::size_t>(holder)].community ==
                             meta[static_cast<std::size_t>(r.consumer)].community);
      EXPECT_NE(holder, r.consumer);
    }
  }
}

TEST(Workload, NoRepeatedNamePerConsumer) {
  auto w = build_workload(WorkloadConfig{}, default_meta(), 9);
  std::set<std::pair<NodeId, ContentId>> seen;
  for (const auto& r : w.requests) EXPECT_TRUE(seen.insert({r.consumer, r.content}).second);
}

TEST(Workload, Deterministic) {
  auto meta = default_meta();
  auto a = build_workload(WorkloadConfig{}, meta, 5);
  auto b = build_workload(WorkloadConfig{}, meta, 5);
  auto c = build_workload(WorkloadConfig{}, meta, 6);
  EXPECT_EQ(a.requests, b.requests);
  EXPECT_EQ(a.producers, b.producers);
  EXPECT_NE(a.requests, c.requests);
}

TEST(Workload, TooManyNamesIsAnError) {
  WorkloadConfig cfg;
  cfg.requests_per_consumer = 100;  // 50 local from a pool of 40
  EXPECT_THROW(build_workload(cfg, default_meta(), 1), workload_error);
}

TEST(Workload, RejectsBadConfig) {
  auto meta = default_meta();
  WorkloadConfig cfg;
  cfg.producers = 5;
  EXPECT_THROW(build_workload(cfg, meta, 1), workload_error);
  cfg = WorkloadConfig{};
  cfg.requests_per_consumer = 41;
  EXPECT_THROW(build_workload(cfg, meta, 1), workload_error);
  cfg = WorkloadConfig{};
  cfg.consumers_per_community = 18;
  EXPECT_THROW(build_workload(cfg, meta, 1), workload_error);
  cfg = WorkloadConfig{};
  cfg.req_end_s = cfg.req_start_s;
  EXPECT_THROW(build_workload(cfg, meta, 1), workload_error);
}

TEST(Workload, ScheduleRoundTrip) {
  auto meta = default_meta();
  auto w = build_workload(WorkloadConfig{}, meta, 4);
  auto p = std::filesystem::temp_directory_path() / "mobccn_schedule.csv";
  save_schedule(w, p);
  EXPECT_EQ(load_schedule(p, w.catalog, meta), w.requests);
}
