#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mobccn/ids.hpp"
#include "mobccn/packets.hpp"

namespace mobccn {

struct IssueRecord {
  RequestId request = 0;
  NodeId consumer = 0;
  ContentId content = 0;
  Seconds time = 0;
  bool local = false;
};

struct SatisfyRecord {
  RequestId request = 0;
  Seconds time = 0;
  std::uint32_t hop_count = 0;
};

struct TransmissionRecord {
  Seconds time = 0;
  PacketKind kind = PacketKind::interest;
  std::uint64_t bytes = 0;
  NodeId from = 0;
  NodeId to = 0;
  bool is_retx = false;
};

// Append-only log of one run. Metrics are computed from it afterwards.
class MetricsLedger {
 public:
  void issue(const IssueRecord& r);
  // Returns false (and counts a duplicate) when the request was already
  // satisfied or was never issued.
  bool satisfy(RequestId request, Seconds time, std::uint32_t hop_count);
  void transmit(const TransmissionRecord& r) { transmissions_.push_back(r); }

  const std::vector<IssueRecord>& issues() const { return issues_; }
  const std::vector<SatisfyRecord>& satisfactions() const { return satisfactions_; }
  const std::vector<TransmissionRecord>& transmissions() const { return transmissions_; }
  std::uint64_t duplicate_deliveries() const { return duplicates_; }
  bool is_satisfied(RequestId r) const {
    return r < satisfied_.size() && satisfied_[r];
  }

  // Canonical text form; equal ledgers serialize to identical bytes.
  std::string serialize() const;

 private:
  std::vector<IssueRecord> issues_;
  std::vector<SatisfyRecord> satisfactions_;
  std::vector<TransmissionRecord> transmissions_;
  std::vector<bool> satisfied_;
  std::vector<bool> issued_;
  std::uint64_t duplicates_ = 0;
};

}  // namespace mobccn
