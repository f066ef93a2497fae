#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobccn/ledger.hpp"

namespace mobccn {

// Statistics of one class of requests (all, local or external) in one run.
struct ClassMetrics {
  std::uint64_t issued = 0;
  std::uint64_t delivered = 0;
  std::optional<double> delivery_rate;  // absent when nothing was issued
  std::optional<double> latency_s;      // mean over delivered requests
  std::optional<double> hop_count;
};

struct RunMetrics {
  ClassMetrics overall;
  ClassMetrics local;
  ClassMetrics external;

  std::uint64_t interest_bytes = 0;
  std::uint64_t data_bytes = 0;
  std::uint64_t hello_bytes = 0;
  std::uint64_t total_bytes = 0;

  std::uint64_t interest_generated = 0;        // I_gen
  std::uint64_t interest_retransmissions = 0;  // I_reTX
  std::uint64_t data_received = 0;             // D_rcv
  std::optional<double> rpi;
  std::optional<double> rpd;
  std::uint64_t duplicate_deliveries = 0;
};

RunMetrics compute_run_metrics(const MetricsLedger& ledger);

struct Estimate {
  double mean = 0;
  std::optional<double> ci95_lo;  // absent with a single sample
  std::optional<double> ci95_hi;
  std::size_t samples = 0;
};

// Mean and Student-t 95% interval of the sample.
Estimate estimate(const std::vector<double>& xs);

// Named scalar view of one run, in report order. Absent values are omitted.
std::vector<std::pair<std::string, double>> flatten(const RunMetrics& m);

// Metric name -> estimate across replications. A metric absent in some
// replications is estimated over the ones where it exists.
using MetricsReport = std::map<std::string, Estimate>;

MetricsReport compute_report(const std::vector<RunMetrics>& replications);
// Throws std::invalid_argument on an empty list.
MetricsReport compute_report(const std::vector<MetricsLedger>& ledgers);

}  // namespace mobccn
