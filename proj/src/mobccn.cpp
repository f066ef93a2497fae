#include "mobccn/mobccn.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mobccn {

std::vector<Candidate> rank_candidates(const Fib& fib, const CnuTable& cnu, ContentId c) {
  std::map<NodeId, double> best;
  auto offer = [&](NodeId n, double u) {
    if (u <= 0) return;
    auto [it, fresh] = best.try_emplace(n, u);
    if (!fresh) it->second = std::max(it->second, u);
  };
  if (c < fib.contents())
    for (const auto& r : fib.routes(c)) offer(r.via, r.utility);
  cnu.for_each(c, offer);

  std::vector<Candidate> out;
  out.reserve(best.size());
  for (auto [n, u] : best) out.push_back(Candidate{n, u});
  std::stable_sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) {
    if (x.utility != y.utility) return x.utility > y.utility;
    return x.node < y.node;
  });
  return out;
}

std::optional<Candidate> select_best_forwarder(const Fib& fib, const CnuTable& cnu, ContentId c) {
  auto ranked = rank_candidates(fib, cnu, c);
  if (ranked.empty()) return std::nullopt;
  return ranked[0];
}

std::optional<Candidate> select_second_best(const Fib& fib, const CnuTable& cnu, ContentId c) {
  auto ranked = rank_candidates(fib, cnu, c);
  if (ranked.size() < 2) return std::nullopt;
  return ranked[1];
}

void StoredInterestQueue::store(const InterestPacket& i, Seconds now, StoreReason reason,
                                bool retransmission) {
  for (auto& s : items_) {
    if (s.interest.content != i.content) continue;
    // A first transmission still waiting covers any retransmission request.
    if (!s.retransmission) return;
    if (retransmission) {
      s.reason = reason;
      return;
    }
  }
  if (!retransmission) std::erase_if(items_, [&](const StoredInterest& s) {
    return s.interest.content == i.content;
  });
  items_.push_back(StoredInterest{i, now, reason, retransmission});
}

void StoredInterestQueue::remove(ContentId c) {
  std::erase_if(items_, [c](const StoredInterest& s) { return s.interest.content == c; });
}

bool StoredInterestQueue::contains(ContentId c) const {
  return std::any_of(items_.begin(), items_.end(),
                     [c](const StoredInterest& s) { return s.interest.content == c; });
}

std::vector<StoredInterest> StoredInterestQueue::take_all() { return std::exchange(items_, {}); }

void StoredInterestQueue::put_back(std::vector<StoredInterest> items) {
  items.insert(items.end(), std::make_move_iterator(items_.begin()),
               std::make_move_iterator(items_.end()));
  items_ = std::move(items);
}

MobCcnStrategy::MobCcnStrategy(const StrategyConfig& cfg, const RunContext& ctx)
    : cfg_(cfg), catalog_(ctx.catalog), sizes_(ctx.sizes), pit_lifetime_(ctx.pit_lifetime_s) {
  const std::size_t nc = catalog_->size();
  nodes_.resize(ctx.n_nodes);
  for (std::size_t i = 0; i < ctx.n_nodes; ++i) {
    auto id = static_cast<NodeId>(i);
    NodeState& n = nodes_[i];
    n.id = id;
    n.fib = Fib(nc);
    n.cnu = CnuTable(nc);
    n.ds = DataStore(nc);
    n.ict = IctEstimator(id, ctx.n_nodes, ctx.ict_mode, ctx.ict_alpha);
    n.utility = UtilityState(id, nc);
  }
  for (ContentId c = 0; c < nc; ++c) {
    NodeState& h = nodes_.at(catalog_->holder(c));
    h.ds.add(c);
    h.utility.seed_holder(c, c < ctx.holder_utility.size() ? ctx.holder_utility[c] : 0.05);
  }
}

std::optional<Seconds> MobCcnStrategy::timer_period() const {
  if (cfg_.variant == Variant::a || cfg_.variant == Variant::ah) return cfg_.t_ageing_s;
  return std::nullopt;
}

void MobCcnStrategy::on_contact_start(Network& net, NodeId self, NodeId peer) {
  NodeState& n = nodes_[self];
  n.ict.record_contact_start(peer, net.now());
  net.send(self, peer, n.utility.build_hello(sizes_));
  flush_owed_data(net, n, peer);
}

void MobCcnStrategy::on_contact_end(Network& net, NodeId self, NodeId peer) {
  NodeState& n = nodes_[self];
  n.ict.record_contact_end(peer, net.now());
  n.cnu.remove_neighbor(peer);
  reevaluate_stored(net, n);
}

void MobCcnStrategy::on_packet(Network& net, NodeId self, NodeId from, const Packet& p) {
  switch (kind_of(p)) {
    case PacketKind::interest: handle_interest(net, self, std::get<InterestPacket>(p), from); break;
    case PacketKind::data: handle_data(net, self, from, std::get<DataPacket>(p)); break;
    case PacketKind::hello: handle_hello(net, self, from, std::get<HelloPacket>(p)); break;
  }
}

void MobCcnStrategy::on_sent(Network&, NodeId self, NodeId to, const Packet& p) {
  if (kind_of(p) != PacketKind::data) return;
  NodeState& n = nodes_[self];
  ContentId c = std::get<DataPacket>(p).content;
  const CsEntry* e = n.cs.find(c);
  if (e && e->is_in_flight(to)) n.cs.mark_served(c, to);
}

void MobCcnStrategy::on_request(Network& net, NodeId consumer, const InterestPacket& i) {
  handle_interest(net, consumer, i, kLocalApp);
}

bool MobCcnStrategy::still_useful(NodeId from, NodeId, const Packet& p) const {
  if (kind_of(p) != PacketKind::interest) return true;
  return nodes_[from].pit.find(std::get<InterestPacket>(p).content) != nullptr;
}

bool MobCcnStrategy::expire(NodeState& n, ContentId c, Seconds now) {
  PitEntry* e = n.pit.find(c);
  if (!e || !n.pit.is_expired(*e, now, pit_lifetime_)) return false;
  n.pit.erase(c);
  n.stored.remove(c);
  ++counters_.expired_pit;
  return true;
}

void MobCcnStrategy::handle_interest(Network& net, NodeId self, const InterestPacket& in, Face from) {
  NodeState& n = nodes_[self];
  const ContentId c = in.content;
  if (c >= catalog_->size()) return;
  expire(n, c, net.now());

  if (n.ds.holds(c)) {
    reply_with(net, n, DataPacket{c, sizes_.chunk, 0, {}}, from, in.request_id);
    return;
  }
  if (const CsEntry* cs = n.cs.find(c)) {
    reply_with(net, n, cs->data, from, in.request_id);
    return;
  }

  auto up = n.pit.upsert(in, from, net.now());
  PitEntry& e = *n.pit.find(c);
  if (up.kind == PitUpsert::created) {
    try_forward(net, n, e, Target::best, false);
    return;
  }
  if (cfg_.variant != Variant::r1 && cfg_.variant != Variant::r2) return;
  if (e.duplicates() <= cfg_.retx_threshold) return;
  // Nothing to retransmit yet, and a node retransmits an entry at most once
  // per instant so that two nodes pointing at each other cannot loop.
  if (e.transmissions == 0 || e.last_retx_at == net.now()) return;
  try_forward(net, n, e, cfg_.variant == Variant::r1 ? Target::best : Target::second_best, true);
}

void MobCcnStrategy::handle_data(Network& net, NodeId self, NodeId from, const DataPacket& d) {
  NodeState& n = nodes_[self];
  const Seconds now = net.now();
  expire(n, d.content, now);
  if (!n.pit.find(d.content)) {
    ++counters_.dropped_unsolicited;
    return;
  }
  auto faces = pit_satisfy(n.pit, n.cs, d, now);
  n.stored.remove(d.content);
  for (const PitFace& f : faces) {
    if (f.face == kLocalApp) {
      net.deliver_to_app(self, f.request_ids, d.hop_count);
      n.cs.mark_served(d.content, kLocalApp);
    } else if (f.face == from) {
      n.cs.mark_served(d.content, f.face);
    } else if (net.in_contact(self, f.face)) {
      n.cs.mark_in_flight(d.content, f.face);
      net.send(self, f.face, DataPacket{d.content, d.size_bytes, d.hop_count, f.request_ids});
    }
  }
}

void MobCcnStrategy::handle_hello(Network& net, NodeId self, NodeId from, const HelloPacket& h) {
  NodeState& n = nodes_[self];
  std::vector<double> computed;
  computed.reserve(h.adverts.size());
  for (const Advert& a : h.adverts) {
    bool holder = catalog_->holder(a.content) == from;
    auto upd = n.utility.recompute_global(a.content, from, a.utility, n.ict, holder);
    computed.push_back(upd.route_utility);
    n.cnu.set(from, a.content, a.utility);
  }
  n.fib.apply_hello(h, computed, net.now());
  reevaluate_stored(net, n);
}

std::optional<Candidate> MobCcnStrategy::resolve(const NodeState& n, const PitEntry& e,
                                                 Target target) const {
  for (const Candidate& cand : rank_candidates(n.fib, n.cnu, e.content)) {
    if (e.has_face(cand.node)) continue;
    if (target == Target::second_best && cand.node == e.first_target) continue;
    return cand;
  }
  return std::nullopt;
}

bool MobCcnStrategy::may_send(const Network& net, const NodeState& n, const Candidate& cand,
                              ContentId c) const {
  if (!net.in_contact(n.id, cand.node)) return false;
  if (cfg_.variant == Variant::ah &&
      !passes_hysteresis(cand.utility, n.utility.global(c), cfg_.hyst_percent))
    return false;
  if (cfg_.strict_cnu_fib_match) {
    std::optional<Candidate> cnu_best;
    n.cnu.for_each(c, [&](NodeId q, double u) {
      if (u > 0 && (!cnu_best || u > cnu_best->utility)) cnu_best = Candidate{q, u};
    });
    if (!cnu_best || cnu_best->node != cand.node) return false;
  }
  return true;
}

void MobCcnStrategy::try_forward(Network& net, NodeState& n, PitEntry& e, Target target,
                                 bool retransmission) {
  auto cand = resolve(n, e, target);
  if (!cand) {
    if (!retransmission) ++counters_.dropped_no_route;
    return;
  }
  if (may_send(net, n, *cand, e.content)) {
    send_interest(net, n, e, cand->node, retransmission);
    return;
  }
  StoreReason why = StoreReason::no_neighbor_best;
  if (target == Target::second_best)
    why = StoreReason::awaiting_second_best;
  else if (net.in_contact(n.id, cand->node))
    why = StoreReason::hysteresis_blocked;
  n.stored.store(e.first_interest, net.now(), why, retransmission);
  ++counters_.stored;
}

void MobCcnStrategy::send_interest(Network& net, NodeState& n, PitEntry& e, NodeId to,
                                   bool retransmission) {
  const bool is_retx = e.transmissions > 0;
  if (e.transmissions == 0) e.first_target = to;
  ++e.transmissions;
  if (retransmission) e.last_retx_at = net.now();
  n.stored.remove(e.content);
  net.send(n.id, to, e.first_interest, is_retx);
}

void MobCcnStrategy::reevaluate_stored(Network& net, NodeState& n) {
  if (n.stored.empty()) return;
  const Seconds now = net.now();
  std::vector<StoredInterest> keep;
  std::set<ContentId> sent;
  for (StoredInterest& s : n.stored.take_all()) {
    const ContentId c = s.interest.content;
    if (sent.count(c)) continue;
    if (expire(n, c, now)) continue;
    PitEntry* e = n.pit.find(c);
    if (!e) continue;
    Target t = s.reason == StoreReason::awaiting_second_best ? Target::second_best : Target::best;
    auto cand = resolve(n, *e, t);
    if (cand && may_send(net, n, *cand, c)) {
      send_interest(net, n, *e, cand->node, s.retransmission);
      sent.insert(c);
      continue;
    }
    keep.push_back(std::move(s));
  }
  std::erase_if(keep, [&](const StoredInterest& s) { return sent.count(s.interest.content) > 0; });
  n.stored.put_back(std::move(keep));
}

void MobCcnStrategy::flush_owed_data(Network& net, NodeState& n, NodeId peer) {
  for (ContentId c : n.cs.owed_to(peer)) {
    CsEntry* e = n.cs.find(c);
    auto f = std::find_if(e->pending.begin(), e->pending.end(),
                          [peer](const PitFace& x) { return x.face == peer; });
    DataPacket d = e->data;
    d.satisfies = f->request_ids;
    n.cs.mark_in_flight(c, peer);
    net.send(n.id, peer, std::move(d));
  }
}

void MobCcnStrategy::reply_with(Network& net, NodeState& n, const DataPacket& stored, Face to,
                                RequestId request) {
  if (to == kLocalApp) {
    RequestId r[1] = {request};
    net.deliver_to_app(n.id, r, stored.hop_count);
    return;
  }
  if (!net.in_contact(n.id, to)) return;
  DataPacket d = stored;
  d.satisfies = {request};
  net.send(n.id, to, std::move(d));
}

void MobCcnStrategy::on_timer(Network& net, NodeId self) {
  NodeState& n = nodes_[self];
  const Seconds now = net.now();
  for (auto it = n.pit.begin(); it != n.pit.end();) {
    if (n.pit.is_expired(it->second, now, pit_lifetime_)) {
      n.stored.remove(it->first);
      ++counters_.expired_pit;
      it = n.pit.erase(it);
      continue;
    }
    try_forward(net, n, it->second, Target::best, true);
    ++it;
  }
}

}  // namespace mobccn
