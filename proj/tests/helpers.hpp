#pragma once

#include <algorithm>
#include <initializer_list>
#include <tuple>
#include <vector>

#include "mobccn/simulator.hpp"
#include "mobccn/trace.hpp"
#include "mobccn/workload.hpp"

namespace testing_helpers {

using namespace mobccn;

inline ContactTrace make_trace(int n_nodes, std::initializer_list<ContactEvent> contacts,
                               int n_communities = 1) {
  ContactTrace t;
  for (int i = 0; i < n_nodes; ++i) t.nodes.push_back(NodeMeta{i % n_communities, false});
  t.contacts.assign(contacts.begin(), contacts.end());
  std::sort(t.contacts.begin(), t.contacts.end(), [](const ContactEvent& x, const ContactEvent& y) {
    return std::tie(x.start, x.a, x.b) < std::tie(y.start, y.a, y.b);
  });
  return t;
}

struct Req {
  NodeId consumer;
  ContentId content;
  Seconds issue;
};

// Producers hold `chunks` contents each, one type.
inline Workload make_workload(std::vector<NodeId> producers, int chunks,
                              std::initializer_list<Req> reqs) {
  Workload w;
  w.producers = producers;
  w.catalog = ContentCatalog(producers, 1, chunks);
  for (const Req& r : reqs) w.requests.push_back(Request{0, r.consumer, r.content, r.issue, true});
  std::stable_sort(w.requests.begin(), w.requests.end(), [](const Request& x, const Request& y) {
    return std::tie(x.issue_s, x.consumer) < std::tie(y.issue_s, y.consumer);
  });
  for (std::size_t i = 0; i < w.requests.size(); ++i) {
    w.requests[i].id = static_cast<RequestId>(i);
    if (std::find(w.consumers.begin(), w.consumers.end(), w.requests[i].consumer) == w.consumers.end())
      w.consumers.push_back(w.requests[i].consumer);
  }
  std::sort(w.consumers.begin(), w.consumers.end());
  return w;
}

inline StrategyConfig protocol(Variant v) {
  StrategyConfig c;
  c.variant = v;
  return c;
}

inline const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> v{Variant::basic, Variant::r1, Variant::r2, Variant::a,
                                      Variant::ah, Variant::ideal_epidemic,
                                      Variant::limited_epidemic};
  return v;
}

// Every completed transfer of one run, in completion order.
struct Observed {
  Seconds time;
  Transfer transfer;
};

struct Recorded {
  MetricsLedger ledger;
  std::vector<Observed> transfers;
};

inline Recorded run_recorded(const ContactTrace& trace, const Workload& w, const StrategyConfig& s,
                             const SimConfig& cfg, std::uint64_t seed = 1) {
  Simulator sim(trace, w, s, cfg, seed);
  Recorded r;
  sim.observe([&](Seconds t, const Transfer& tr) { r.transfers.push_back(Observed{t, tr}); });
  sim.run();
  r.ledger = sim.take_ledger();
  return r;
}

inline std::size_t count_kind(const Recorded& r, PacketKind k) {
  return static_cast<std::size_t>(std::count_if(r.transfers.begin(), r.transfers.end(),
                                                [k](const Observed& o) { return kind_of(o.transfer.packet) == k; }));
}

}  // namespace testing_helpers
