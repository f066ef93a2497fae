#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mobccn/experiment.hpp"

using namespace mobccn;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

ExperimentSpec spec_of(const json& j) {
  auto r = validate_config(j);
  if (auto* issues = std::get_if<std::vector<ConfigIssue>>(&r)) {
    std::string all;
    for (const auto& i : *issues) all += i.key + ": " + i.reason + "; ";
    throw std::runtime_error(all);
  }
  return std::get<ExperimentSpec>(r);
}

std::vector<ConfigIssue> issues_of(const json& j) {
  auto r = validate_config(j);
  auto* issues = std::get_if<std::vector<ConfigIssue>>(&r);
  return issues ? *issues : std::vector<ConfigIssue>{};
}

// A few minutes of a small network; each run takes milliseconds.
json tiny(json extra = json::object()) {
  json j = {
      {"replications", 2},
      {"trace", {{"n_nodes", 15}, {"duration_s", 20000}, {"traveller_visit_rate", 1.0}}},
      {"workload",
       {{"producers", 3},
        {"consumers_per_community", 1},
        {"requests_per_consumer", 4},
        {"req_start_s", 5000},
        {"req_end_s", 15000}}},
  };
  j.update(extra);
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, EmptyObjectGivesDefaults) {
  auto s = spec_of(json::object());
  EXPECT_EQ(s.scenario, Scenario::basic);
  EXPECT_EQ(s.replications, 10);
  ASSERT_EQ(s.protocols.size(), 7u);
  EXPECT_EQ(s.protocols[3].variant, Variant::a);
  EXPECT_EQ(s.protocols[3].t_ageing_s, 40000);
  EXPECT_EQ(s.protocols[4].hyst_percent, 55);
  EXPECT_EQ(s.trace.n_nodes, 60);
  EXPECT_EQ(s.trace.duration_s, 129600);
  EXPECT_EQ(s.workload.requests_per_consumer, 40);
  EXPECT_FALSE(s.sim.bandwidth_bps);
  EXPECT_EQ(s.sim.duration_s, s.trace.duration_s);
}

TEST(Config, EmptyFileIsEmptyObject) {
  auto p = fs::temp_directory_path() / "mobccn_empty.json";
  std::ofstream(p).close();
  auto r = validate_config_file(p);
  ASSERT_TRUE(std::holds_alternative<ExperimentSpec>(r));
  EXPECT_EQ(std::get<ExperimentSpec>(r).replications, 10);
}

TEST(Config, AgeingFilledForA) {
  auto s = spec_of({{"protocol", {{"variant", "MobCCN_A"}}}});
  ASSERT_EQ(s.protocols.size(), 1u);
  EXPECT_EQ(s.protocols[0].variant, Variant::a);
  EXPECT_EQ(s.protocols[0].t_ageing_s, 40000);
}

TEST(Config, NegativeHysteresisRejected) {
  auto issues = issues_of({{"protocol", {{"variant", "AH"}, {"hyst_percent", -5}}}});
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].key, "protocol.hyst_percent");
  EXPECT_EQ(issues[0].reason, "must be ≥ 0");
}

TEST(Config, UnknownKeysAndNamesRejected) {
  auto issues = issues_of({{"replicas", 3}, {"protocols", {"MobCCN_Z"}}, {"scenario", "nope"},
                           {"trace", {{"nodes", 5}}}});
  std::set<std::string> keys;
  for (const auto& i : issues) keys.insert(i.key);
  EXPECT_TRUE(keys.count("replicas"));
  EXPECT_TRUE(keys.count("protocols[0]"));
  EXPECT_TRUE(keys.count("scenario"));
  EXPECT_TRUE(keys.count("trace.nodes"));
}

TEST(Config, NormalizedJsonRoundTrips) {
  auto s = spec_of(tiny({{"scenario", "bandwidth_sweep"}, {"bandwidth_mbps", {10, "infinite"}}}));
  auto again = spec_of(to_json(s));
  EXPECT_EQ(to_json(again), to_json(s));
}

TEST(Expand, RunCounts) {
  auto basic = spec_of(json::object());
  EXPECT_EQ(expand(basic).size() * basic.protocols.size() * basic.replications, 70u);

  auto bw = spec_of({{"scenario", "bandwidth_sweep"},
                     {"protocols", {"MobCCN_basic", "MobCCN_R1", "MobCCN_R2", "MobCCN_A", "MobCCN_AH"}}});
  EXPECT_EQ(expand(bw).size() * bw.protocols.size() * bw.replications, 150u);

  auto load = spec_of({{"scenario", "load_sweep"}});
  ASSERT_EQ(expand(load).size(), 4u);
  EXPECT_EQ(expand(load)[3].workload.consumers_per_community, 16);
}

TEST(Expand, ReducedIctOverrides) {
  auto s = spec_of({{"scenario", "reduced_ict"}, {"bandwidth_mbps", {10}}});
  auto points = expand(s);
  ASSERT_EQ(points.size(), 1u);
  EXPECT_EQ(points[0].ict_scale, 0.1);
  EXPECT_EQ(points[0].sim.bandwidth_bps, 10e6);
  auto a = apply_point(s.protocols[3], points[0]);
  auto ah = apply_point(s.protocols[4], points[0]);
  EXPECT_EQ(a.t_ageing_s, 1800);
  EXPECT_EQ(ah.hyst_percent, 35);
  // The scaled trace still covers the whole run.
  auto in = build_inputs(s, points[0], 0);
  EXPECT_GT(in.trace.contacts.back().start, 0.9 * s.trace.duration_s);
  for (const auto& c : in.trace.contacts) EXPECT_LE(c.end, s.trace.duration_s);
}

TEST(Expand, IdenticalRequests) {
  auto s = spec_of({{"scenario", "identical_requests"}});
  auto p = expand(s);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].workload.consumers_per_community, 16);
  EXPECT_EQ(p[0].workload.overlap_mode, OverlapMode::identical_set);
}

TEST(Experiment, InputsArePairedAcrossProtocols) {
  auto s = spec_of(tiny());
  auto point = expand(s)[0];
  auto a = build_inputs(s, point, 1), b = build_inputs(s, point, 1), c = build_inputs(s, point, 0);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.workload.requests, b.workload.requests);
  EXPECT_NE(a.trace, c.trace);
  EXPECT_EQ(replication_seed(s, 3), s.base_seed + 3);
}

TEST(Experiment, RepeatRunsAreByteIdentical) {
  auto s = spec_of(tiny({{"jobs", 1}}));
  std::size_t total = 0;
  auto r1 = run_experiment(s, [&](std::size_t, std::size_t t) { total = t; });
  EXPECT_EQ(total, 14u);
  s.jobs = 3;
  auto r2 = run_experiment(s);
  auto d1 = fs::temp_directory_path() / "mobccn_exp_a", d2 = fs::temp_directory_path() / "mobccn_exp_b";
  write_reports(s, r1, d1);
  write_reports(s, r2, d2);
  EXPECT_EQ(slurp(d1 / "report.csv"), slurp(d2 / "report.csv"));
  EXPECT_EQ(slurp(d1 / "report.json"), slurp(d2 / "report.json"));
  EXPECT_FALSE(slurp(d1 / "report.csv").empty());
}

TEST(Experiment, CsvSchema) {
  auto s = spec_of(tiny({{"protocols", {"MobCCN_AH", "IdealEpidemic"}}}));
  auto r = run_experiment(s);
  ASSERT_EQ(r.results.size(), 2u);
  EXPECT_EQ(r.results[0].runs.size(), 2u);
  ASSERT_NE(r.find("basic", "IdealEpidemic"), nullptr);
  std::string csv = report_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "scenario,protocol,metric,mean,ci95_lo,ci95_hi");
  EXPECT_NE(csv.find("\nbasic,MobCCN_AH,delivery_rate,"), std::string::npos);
}

TEST(Experiment, JobsFromEnvironment) {
  ::setenv("MOBCCN_SIM_JOBS", "3", 1);
  EXPECT_EQ(resolve_jobs(0), 3);
  EXPECT_EQ(resolve_jobs(2), 2);
  ::unsetenv("MOBCCN_SIM_JOBS");
  EXPECT_GE(resolve_jobs(0), 1);
}
