#include "mobccn/ledger.hpp"

#include <cstdio>

namespace mobccn {

void MetricsLedger::issue(const IssueRecord& r) {
  if (r.request >= issued_.size()) {
    issued_.resize(r.request + 1, false);
    satisfied_.resize(r.request + 1, false);
  }
  issued_[r.request] = true;
  issues_.push_back(r);
}

bool MetricsLedger::satisfy(RequestId request, Seconds time, std::uint32_t hop_count) {
  if (request >= issued_.size() || !issued_[request] || satisfied_[request]) {
    ++duplicates_;
    return false;
  }
  satisfied_[request] = true;
  satisfactions_.push_back(SatisfyRecord{request, time, hop_count});
  return true;
}

std::string MetricsLedger::serialize() const {
  std::string out;
  char buf[160];
  for (const auto& r : issues_) {
    std::snprintf(buf, sizeof buf, "I %u %d %u %.17g %d\n", r.request, r.consumer, r.content,
                  r.time, r.local ? 1 : 0);
    out += buf;
  }
  for (const auto& s : satisfactions_) {
    std::snprintf(buf, sizeof buf, "S %u %.17g %u\n", s.request, s.time, s.hop_count);
    out += buf;
  }
  for (const auto& t : transmissions_) {
    std::snprintf(buf, sizeof buf, "T %.17g %s %llu %d %d %d\n", t.time, to_string(t.kind),
                  static_cast<unsigned long long>(t.bytes), t.from, t.to, t.is_retx ? 1 : 0);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "D %llu\n", static_cast<unsigned long long>(duplicates_));
  out += buf;
  return out;
}

}  // namespace mobccn
