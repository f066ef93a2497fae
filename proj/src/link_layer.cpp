#include "mobccn/link_layer.hpp"

#include <algorithm>
#include <stdexcept>

namespace mobccn {

namespace {

constexpr Seconds kNever = std::numeric_limits<Seconds>::infinity();

int priority(const Packet& p) {
  switch (kind_of(p)) {
    case PacketKind::data: return 0;
    case PacketKind::interest: return 1;
    case PacketKind::hello: return 2;
  }
  return 2;
}

}  // namespace

LinkLayer::LinkLayer(std::size_t n_nodes, double bandwidth_bps, Sharing sharing)
    : n_nodes_(n_nodes),
      bytes_per_s_(bandwidth_bps / 8.0),
      sharing_(sharing),
      degree_(n_nodes, 0),
      nbrs_(n_nodes) {
  if (!(bandwidth_bps > 0)) throw std::invalid_argument("bandwidth must be positive");
}

LinkLayer::Link& LinkLayer::link(NodeId from, NodeId to) { return links_[key(from, to)]; }

double LinkLayer::share(NodeId from, NodeId to) const {
  if (sharing_ == Sharing::sender_degree) return bytes_per_s_ / static_cast<double>(degree_[from]);
  return bytes_per_s_ / static_cast<double>(degree_[from] + degree_[to] - 1);
}

std::vector<std::pair<NodeId, NodeId>> LinkLayer::affected_by(NodeId n) const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId x : nbrs_[n]) {
    out.emplace_back(n, x);
    if (sharing_ == Sharing::clique) out.emplace_back(x, n);
  }
  return out;
}

void LinkLayer::settle(Link& l, Seconds now) {
  if (l.active && l.head && now > l.last_update) {
    double moved = std::min(l.head->remaining, l.rate * (now - l.last_update));
    l.head->remaining -= moved;
    l.head->segments.back() += moved;
  }
  l.last_update = now;
}

void LinkLayer::reschedule(Key k, Link& l) {
  if (l.scheduled) {
    done_.erase({*l.scheduled, k});
    l.scheduled.reset();
  }
  if (!l.active || !l.head || l.rate <= 0) return;
  Seconds t = l.last_update + l.head->remaining / l.rate;
  l.scheduled = t;
  done_.insert({t, k});
}

void LinkLayer::contact_up(NodeId a, NodeId b, Seconds now) {
  auto touched = affected_by(a);
  auto more = affected_by(b);
  touched.insert(touched.end(), more.begin(), more.end());
  for (auto [s, r] : touched) settle(link(s, r), now);

  ++degree_[a];
  ++degree_[b];
  nbrs_[a].insert(b);
  nbrs_[b].insert(a);
  touched.emplace_back(a, b);
  touched.emplace_back(b, a);
  for (auto [s, r] : {std::pair{a, b}, std::pair{b, a}}) {
    Link& l = link(s, r);
    l.active = true;
    l.last_update = now;
    if (l.head) l.head->segments.push_back(0.0);
    idle_.insert(key(s, r));
  }
  for (auto [s, r] : touched) {
    Link& l = link(s, r);
    l.rate = share(s, r);
    reschedule(key(s, r), l);
  }
}

void LinkLayer::contact_down(NodeId a, NodeId b, Seconds now) {
  auto touched = affected_by(a);
  auto more = affected_by(b);
  touched.insert(touched.end(), more.begin(), more.end());
  for (auto [s, r] : touched) settle(link(s, r), now);

  for (auto [s, r] : {std::pair{a, b}, std::pair{b, a}}) {
    Link& l = link(s, r);
    l.active = false;
    l.rate = 0;
    reschedule(key(s, r), l);
    if (l.head && kind_of(l.head->transfer.packet) == PacketKind::hello) {
      l.keys.erase(l.head->transfer.dedupe_key);
      l.head.reset();
    }
    for (const Transfer& t : l.queues[2]) l.keys.erase(t.dedupe_key);
    l.queues[2].clear();
  }
  --degree_[a];
  --degree_[b];
  nbrs_[a].erase(b);
  nbrs_[b].erase(a);
  for (auto [s, r] : touched) {
    Link& l = link(s, r);
    if (!l.active) continue;
    l.rate = share(s, r);
    reschedule(key(s, r), l);
  }
}

bool LinkLayer::enqueue(Transfer t) {
  Key k = key(t.from, t.to);
  Link& l = link(t.from, t.to);
  if (!l.active) throw std::logic_error("enqueue on an inactive link");
  if (t.dedupe_key != 0 && !l.keys.insert(t.dedupe_key).second) return false;
  l.queues[priority(t.packet)].push_back(std::move(t));
  idle_.insert(k);
  return true;
}

void LinkLayer::start_next(Link& l, Seconds now) {
  while (!l.head) {
    std::deque<Transfer>* q = nullptr;
    for (auto& cand : l.queues)
      if (!cand.empty()) {
        q = &cand;
        break;
      }
    if (!q) return;
    Transfer t = std::move(q->front());
    q->pop_front();
    if (useful_ && !useful_(t)) {
      l.keys.erase(t.dedupe_key);
      continue;
    }
    double size = static_cast<double>(t.size_bytes);
    l.head = InFlight{std::move(t), size, now, {0.0}};
    l.last_update = now;
  }
}

void LinkLayer::pump(Seconds now) {
  for (Key k : std::exchange(idle_, {})) {
    Link& l = links_[k];
    if (!l.active || l.head) continue;
    start_next(l, now);
    reschedule(k, l);
  }
}

Seconds LinkLayer::next_completion() const { return done_.empty() ? kNever : done_.begin()->first; }

CompletedTransfer LinkLayer::complete_next(Seconds now) {
  if (done_.empty()) throw std::logic_error("no transfer in flight");
  auto [t, k] = *done_.begin();
  done_.erase(done_.begin());
  Link& l = links_[k];
  l.scheduled.reset();
  settle(l, now);
  InFlight f = std::move(*l.head);
  l.head.reset();
  // What is left is rounding from the rate integration.
  f.segments.back() += f.remaining;
  l.keys.erase(f.transfer.dedupe_key);
  idle_.insert(k);
  return CompletedTransfer{std::move(f.transfer), f.started_at, now, std::move(f.segments)};
}

double LinkLayer::rate(NodeId from, NodeId to) const {
  auto it = links_.find(key(from, to));
  return it == links_.end() || !it->second.active ? 0.0 : it->second.rate;
}

std::size_t LinkLayer::backlog(NodeId from, NodeId to) const {
  auto it = links_.find(key(from, to));
  if (it == links_.end()) return 0;
  std::size_t n = it->second.head ? 1 : 0;
  for (const auto& q : it->second.queues) n += q.size();
  return n;
}

std::optional<double> LinkLayer::remaining(NodeId from, NodeId to) const {
  auto it = links_.find(key(from, to));
  if (it == links_.end() || !it->second.head) return std::nullopt;
  return it->second.head->remaining;
}

}  // namespace mobccn
