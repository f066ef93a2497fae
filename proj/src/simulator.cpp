#include "mobccn/simulator.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace mobccn {

namespace {

constexpr std::uint64_t kHolderStream = 0x686f6c646572ULL;
constexpr std::uint64_t kTimerStream = 0x74696d6572ULL;

std::uint64_t dedupe_key(const Packet& p) {
  switch (kind_of(p)) {
    case PacketKind::data: return (1ULL << 40) | std::get<DataPacket>(p).content;
    case PacketKind::interest: return (2ULL << 40) | std::get<InterestPacket>(p).content;
    case PacketKind::hello: return 0;
  }
  return 0;
}

}  // namespace

bool Simulator::Later::operator()(const Event& x, const Event& y) const {
  if (x.time != y.time) return x.time > y.time;
  if (x.kind != y.kind) return x.kind > y.kind;
  return x.seq > y.seq;
}

std::vector<double> Simulator::seed_holder_utilities(std::size_t n_contents, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ kHolderStream);
  std::uniform_real_distribution<double> u(0.01, 0.1);
  std::vector<double> out(n_contents);
  for (auto& v : out) v = u(rng);
  return out;
}

Simulator::Simulator(const ContactTrace& trace, const Workload& workload,
                     const StrategyConfig& strategy, const SimConfig& cfg, std::uint64_t seed)
    : trace_(trace), workload_(workload), cfg_(cfg), nbrs_(trace.n_nodes()) {
  validate_inputs();
  RunContext ctx;
  ctx.n_nodes = trace.n_nodes();
  ctx.catalog = &workload.catalog;
  ctx.sizes = cfg.sizes;
  ctx.pit_lifetime_s = cfg.pit_lifetime_s;
  ctx.ict_mode = cfg.ict_mode;
  ctx.ict_alpha = cfg.ict_alpha;
  ctx.seed = seed;
  ctx.holder_utility = seed_holder_utilities(workload.catalog.size(), seed);
  strategy_ = make_strategy(strategy, ctx);
  init(seed);
}

Simulator::Simulator(const ContactTrace& trace, const Workload& workload,
                     std::unique_ptr<Strategy> strategy, const SimConfig& cfg, std::uint64_t seed)
    : trace_(trace), workload_(workload), cfg_(cfg), strategy_(std::move(strategy)),
      nbrs_(trace.n_nodes()) {
  if (!strategy_) throw std::invalid_argument("no strategy");
  validate_inputs();
  init(seed);
}

void Simulator::validate_inputs() const {
  validate_trace(trace_);
  const std::size_t n = trace_.n_nodes();
  for (const Request& r : workload_.requests) {
    if (r.consumer < 0 || static_cast<std::size_t>(r.consumer) >= n)
      throw workload_error("request " + std::to_string(r.id) + " from unknown node");
    if (r.content >= workload_.catalog.size())
      throw workload_error("request " + std::to_string(r.id) + " for unknown content");
  }
  for (NodeId p : workload_.catalog.producers())
    if (p < 0 || static_cast<std::size_t>(p) >= n) throw workload_error("producer outside the trace");
}

void Simulator::init(std::uint64_t seed) {
  const std::size_t n = trace_.n_nodes();
  if (cfg_.bandwidth_bps) {
    links_.emplace(n, *cfg_.bandwidth_bps, cfg_.sharing);
    links_->set_useful_check(
        [this](const Transfer& t) { return strategy_->still_useful(t.from, t.to, t.packet); });
  }

  for (std::size_t i = 0; i < trace_.contacts.size(); ++i) {
    const ContactEvent& c = trace_.contacts[i];
    if (c.start >= cfg_.duration_s) continue;
    push(c.start, EventKind::contact_start, static_cast<std::int64_t>(i));
    if (c.end < cfg_.duration_s) push(c.end, EventKind::contact_end, static_cast<std::int64_t>(i));
  }
  for (std::size_t i = 0; i < workload_.requests.size(); ++i) {
    if (workload_.requests[i].issue_s < cfg_.duration_s)
      push(workload_.requests[i].issue_s, EventKind::request_issue, static_cast<std::int64_t>(i));
  }
  if (auto period = strategy_->timer_period()) {
    std::mt19937_64 rng(seed ^ kTimerStream);
    std::uniform_real_distribution<double> phase(0.0, *period);
    for (std::size_t i = 0; i < n; ++i) {
      Seconds t = phase(rng);
      if (t < cfg_.duration_s) push(t, EventKind::timer_fire, static_cast<std::int64_t>(i));
    }
  }
  push(cfg_.duration_s, EventKind::sim_end, 0);
}

Simulator::~Simulator() = default;

void Simulator::push(Seconds t, EventKind k, std::int64_t a) {
  events_.push(Event{t, k, seq_++, a});
}

bool Simulator::in_contact(NodeId a, NodeId b) const {
  if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= nbrs_.size()) return false;
  return std::binary_search(nbrs_[a].begin(), nbrs_[a].end(), b);
}

void Simulator::send(NodeId from, NodeId to, Packet packet, bool is_retx) {
  if (!in_contact(from, to))
    throw invariant_violation("send " + std::to_string(from) + "->" + std::to_string(to) +
                              " without an active contact at t=" + std::to_string(now_));
  Transfer t;
  t.from = from;
  t.to = to;
  t.size_bytes = size_of(packet);
  t.is_retx = is_retx;
  t.dedupe_key = dedupe_key(packet);
  t.packet = std::move(packet);
  if (links_)
    links_->enqueue(std::move(t));
  else
    immediate_.push_back(std::move(t));
}

void Simulator::deliver_to_app(NodeId, std::span<const RequestId> requests,
                               std::uint32_t hop_count) {
  for (RequestId r : requests) ledger_.satisfy(r, now_, hop_count);
}

void Simulator::arrive(const Transfer& t) {
  if (observer_) observer_(now_, t);
  ledger_.transmit(TransmissionRecord{now_, kind_of(t.packet), t.size_bytes, t.from, t.to, t.is_retx});
  strategy_->on_sent(*this, t.from, t.to, t.packet);
  Packet p = t.packet;
  if (auto* i = std::get_if<InterestPacket>(&p)) ++i->hop_count;
  if (auto* d = std::get_if<DataPacket>(&p)) ++d->hop_count;
  strategy_->on_packet(*this, t.to, t.from, p);
}

void Simulator::settle_sends() {
  if (links_) {
    links_->pump(now_);
    return;
  }
  while (immediate_head_ < immediate_.size()) {
    Transfer t = std::move(immediate_[immediate_head_++]);
    if (!strategy_->still_useful(t.from, t.to, t.packet)) continue;
    arrive(t);
  }
  immediate_.clear();
  immediate_head_ = 0;
}

void Simulator::dispatch(const Event& e) {
  switch (e.kind) {
    case EventKind::contact_start: {
      const ContactEvent& c = trace_.contacts[static_cast<std::size_t>(e.a)];
      auto& na = nbrs_[c.a];
      auto& nb = nbrs_[c.b];
      na.insert(std::lower_bound(na.begin(), na.end(), c.b), c.b);
      nb.insert(std::lower_bound(nb.begin(), nb.end(), c.a), c.a);
      if (links_) links_->contact_up(c.a, c.b, now_);
      strategy_->on_contact_start(*this, c.a, c.b);
      strategy_->on_contact_start(*this, c.b, c.a);
      break;
    }
    case EventKind::contact_end: {
      const ContactEvent& c = trace_.contacts[static_cast<std::size_t>(e.a)];
      std::erase(nbrs_[c.a], c.b);
      std::erase(nbrs_[c.b], c.a);
      if (links_) links_->contact_down(c.a, c.b, now_);
      strategy_->on_contact_end(*this, c.a, c.b);
      strategy_->on_contact_end(*this, c.b, c.a);
      break;
    }
    case EventKind::request_issue: {
      const Request& r = workload_.requests[static_cast<std::size_t>(e.a)];
      ledger_.issue(IssueRecord{r.id, r.consumer, r.content, r.issue_s, r.local});
      strategy_->on_request(*this, r.consumer,
                            InterestPacket{r.content, r.consumer, r.id, 0, cfg_.sizes.interest});
      break;
    }
    case EventKind::timer_fire: {
      auto node = static_cast<NodeId>(e.a);
      strategy_->on_timer(*this, node);
      Seconds next = now_ + *strategy_->timer_period();
      if (next < cfg_.duration_s) push(next, EventKind::timer_fire, e.a);
      break;
    }
    case EventKind::sim_end: break;
  }
}

void Simulator::run() {
  constexpr Seconds kNever = std::numeric_limits<Seconds>::infinity();
  while (!events_.empty()) {
    Seconds next_event = events_.top().time;
    Seconds next_done = links_ ? links_->next_completion() : kNever;
    if (next_done <= next_event && next_done < cfg_.duration_s) {
      now_ = next_done;
      CompletedTransfer done = links_->complete_next(now_);
      arrive(done.transfer);
      links_->pump(now_);
      continue;
    }
    Event e = events_.top();
    events_.pop();
    now_ = e.time;
    if (e.kind == EventKind::sim_end) break;
    dispatch(e);
    settle_sends();
  }
}

MetricsLedger run_simulation(const ContactTrace& trace, const Workload& workload,
                             const StrategyConfig& strategy, const SimConfig& cfg,
                             std::uint64_t seed) {
  Simulator sim(trace, workload, strategy, cfg, seed);
  sim.run();
  return sim.take_ledger();
}

}  // namespace mobccn
