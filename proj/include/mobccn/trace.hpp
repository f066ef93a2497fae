#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mobccn/ids.hpp"

namespace mobccn {

// One contact between two nodes, active over [start, end).
struct ContactEvent {
  NodeId a = 0;  // a < b
  NodeId b = 0;
  Seconds start = 0;
  Seconds end = 0;

  bool operator==(const ContactEvent&) const = default;
};

struct NodeMeta {
  int community = 0;
  bool traveller = false;

  bool operator==(const NodeMeta&) const = default;
};

struct ContactTrace {
  std::vector<ContactEvent> contacts;  // sorted by (start, a, b)
  std::vector<NodeMeta> nodes;

  std::size_t n_nodes() const { return nodes.size(); }
  bool operator==(const ContactTrace&) const = default;
};

struct TraceConfig {
  int n_nodes = 60;
  int n_communities = 3;
  int travellers_per_community = 1;
  Seconds mean_intra_ict_s = 900;
  Seconds mean_contact_duration_s = 120;
  double traveller_visit_rate = 0.1;  // external visits per hour spent at home
  Seconds mean_visit_duration_s = 7200;
  Seconds duration_s = 129600;
  std::uint64_t seed = 1;
};

// Community-structured synthetic trace. Co-located pairs meet as a renewal
// process with exponential gaps and durations; travellers alternate between
// home and whole-community visits elsewhere.
ContactTrace generate_trace(const TraceConfig& cfg);

// Multiplies every per-pair gap between consecutive contacts by `factor`,
// keeping durations and the first contact of each pair in place.
ContactTrace scale_icts(const ContactTrace& trace, double factor);

// Drops contacts starting at or after `horizon` and cuts the rest at it.
ContactTrace clip_trace(const ContactTrace& trace, Seconds horizon);

// Throws trace_error on end <= start, self contacts, unknown nodes, unsorted
// contacts or overlapping contacts of the same pair.
void validate_trace(const ContactTrace& trace);

// CSV "node_a,node_b,start_s,end_s" plus sidecar "node,community,is_traveller"
// at metadata_path_for(path).
void save_trace(const ContactTrace& trace, const std::filesystem::path& path);
ContactTrace load_trace(const std::filesystem::path& path);
// Without a sidecar every node defaults to community 0, non-traveller, and a
// warning is appended to `warnings`.
ContactTrace load_trace(const std::filesystem::path& path, std::vector<std::string>& warnings);
std::filesystem::path metadata_path_for(const std::filesystem::path& trace_path);

}  // namespace mobccn
