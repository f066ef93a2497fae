#include "mobccn/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include <boost/math/distributions/students_t.hpp>

namespace mobccn {

namespace {

struct Acc {
  std::uint64_t issued = 0;
  std::uint64_t delivered = 0;
  double latency = 0;
  double hops = 0;

  ClassMetrics finish() const {
    ClassMetrics m;
    m.issued = issued;
    m.delivered = delivered;
    if (issued > 0) m.delivery_rate = static_cast<double>(delivered) / static_cast<double>(issued);
    if (delivered > 0) {
      m.latency_s = latency / static_cast<double>(delivered);
      m.hop_count = hops / static_cast<double>(delivered);
    }
    return m;
  }
};

void put_class(std::vector<std::pair<std::string, double>>& out, const std::string& suffix,
               const ClassMetrics& c) {
  if (c.delivery_rate) out.emplace_back("delivery_rate" + suffix, *c.delivery_rate);
  if (c.latency_s) out.emplace_back("latency_s" + suffix, *c.latency_s);
  if (c.hop_count) out.emplace_back("hop_count" + suffix, *c.hop_count);
}

}  // namespace

RunMetrics compute_run_metrics(const MetricsLedger& ledger) {
  std::unordered_map<RequestId, const SatisfyRecord*> sat;
  for (const auto& s : ledger.satisfactions()) sat.emplace(s.request, &s);

  Acc all, local, external;
  for (const auto& i : ledger.issues()) {
    Acc& cls = i.local ? local : external;
    ++all.issued;
    ++cls.issued;
    auto it = sat.find(i.request);
    if (it == sat.end()) continue;
    double lat = it->second->time - i.time;
    for (Acc* a : {&all, &cls}) {
      ++a->delivered;
      a->latency += lat;
      a->hops += it->second->hop_count;
    }
  }

  RunMetrics m;
  m.overall = all.finish();
  m.local = local.finish();
  m.external = external.finish();
  for (const auto& t : ledger.transmissions()) {
    switch (t.kind) {
      case PacketKind::interest: m.interest_bytes += t.bytes; break;
      case PacketKind::data: m.data_bytes += t.bytes; break;
      case PacketKind::hello: m.hello_bytes += t.bytes; break;
    }
    if (t.is_retx && t.kind == PacketKind::interest) ++m.interest_retransmissions;
  }
  m.total_bytes = m.interest_bytes + m.data_bytes + m.hello_bytes;
  m.interest_generated = all.issued;
  m.data_received = all.delivered;
  if (m.interest_generated > 0)
    m.rpi = static_cast<double>(m.interest_retransmissions) / static_cast<double>(m.interest_generated);
  if (m.data_received > 0)
    m.rpd = static_cast<double>(m.interest_retransmissions) / static_cast<double>(m.data_received);
  m.duplicate_deliveries = ledger.duplicate_deliveries();
  return m;
}

Estimate estimate(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("no samples");
  Estimate e;
  e.samples = xs.size();
  double sum = 0;
  for (double x : xs) sum += x;
  e.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return e;
  double ss = 0;
  for (double x : xs) ss += (x - e.mean) * (x - e.mean);
  double n = static_cast<double>(xs.size());
  double sd = std::sqrt(ss / (n - 1));
  boost::math::students_t dist(n - 1);
  double half = boost::math::quantile(dist, 0.975) * sd / std::sqrt(n);
  e.ci95_lo = e.mean - half;
  e.ci95_hi = e.mean + half;
  return e;
}

std::vector<std::pair<std::string, double>> flatten(const RunMetrics& m) {
  std::vector<std::pair<std::string, double>> out;
  put_class(out, "", m.overall);
  put_class(out, "_local", m.local);
  put_class(out, "_external", m.external);
  out.emplace_back("traffic_bytes", static_cast<double>(m.total_bytes));
  out.emplace_back("traffic_interest_bytes", static_cast<double>(m.interest_bytes));
  out.emplace_back("traffic_data_bytes", static_cast<double>(m.data_bytes));
  out.emplace_back("traffic_hello_bytes", static_cast<double>(m.hello_bytes));
  out.emplace_back("interests_generated", static_cast<double>(m.interest_generated));
  out.emplace_back("interest_retransmissions", static_cast<double>(m.interest_retransmissions));
  out.emplace_back("data_received", static_cast<double>(m.data_received));
  if (m.rpi) out.emplace_back("rpi", *m.rpi);
  if (m.rpd) out.emplace_back("rpd", *m.rpd);
  out.emplace_back("duplicate_deliveries", static_cast<double>(m.duplicate_deliveries));
  return out;
}

MetricsReport compute_report(const std::vector<RunMetrics>& replications) {
  if (replications.empty()) throw std::invalid_argument("no replications");
  std::map<std::string, std::vector<double>> values;
  for (const auto& r : replications)
    for (auto& [k, v] : flatten(r)) values[k].push_back(v);
  MetricsReport out;
  for (auto& [k, xs] : values) out.emplace(k, estimate(xs));
  return out;
}

MetricsReport compute_report(const std::vector<MetricsLedger>& ledgers) {
  if (ledgers.empty()) throw std::invalid_argument("no ledgers");
  std::vector<RunMetrics> runs;
  for (const auto& l : ledgers) runs.push_back(compute_run_metrics(l));
  return compute_report(runs);
}

}  // namespace mobccn
