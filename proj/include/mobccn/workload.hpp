#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mobccn/content.hpp"
#include "mobccn/ids.hpp"
#include "mobccn/trace.hpp"

namespace mobccn {

enum class OverlapMode { disjoint, identical_set };

struct WorkloadConfig {
  int producers = 6;
  int consumers_per_community = 4;
  int types_per_producer = 4;
  int chunks_per_type = 5;
  int requests_per_consumer = 40;
  double local_fraction = 0.5;
  double lambda_req = 1.0 / 900.0;
  Seconds req_start_s = 39600;
  Seconds req_end_s = 79200;
  OverlapMode overlap_mode = OverlapMode::disjoint;
};

struct Request {
  RequestId id = 0;
  NodeId consumer = 0;
  ContentId content = 0;
  Seconds issue_s = 0;
  bool local = false;

  bool operator==(const Request&) const = default;
};

struct Workload {
  ContentCatalog catalog;
  std::vector<NodeId> producers;
  std::vector<NodeId> consumers;
  std::vector<Request> requests;  // sorted by (issue_s, consumer); id == index
};

Workload build_workload(const WorkloadConfig& cfg, const std::vector<NodeMeta>& meta,
                        std::uint64_t seed);

// CSV "consumer,producer,type,chunk,issue_s,request_id".
void save_schedule(const Workload& w, const std::filesystem::path& path);
// Rebuilds the request list against an existing catalog; `meta` provides
// the local/external classification.
std::vector<Request> load_schedule(const std::filesystem::path& path,
                                   const ContentCatalog& catalog,
                                   const std::vector<NodeMeta>& meta);

}  // namespace mobccn
