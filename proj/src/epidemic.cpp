#include "mobccn/epidemic.hpp"

#include <algorithm>

namespace mobccn {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

// ---------------------------------------------------------------------------
// Ideal epidemic
// ---------------------------------------------------------------------------

IdealEpidemicStrategy::IdealEpidemicStrategy(const RunContext& ctx)
    : catalog_(ctx.catalog), sizes_(ctx.sizes), nodes_(ctx.n_nodes) {
  for (auto& n : nodes_) {
    n.data.resize(catalog_->size());
    n.data_hops.assign(catalog_->size(), 0);
  }
}

void IdealEpidemicStrategy::ensure_request_slot(RequestId r) {
  if (r < interests_.size()) return;
  std::size_t size = std::max<std::size_t>(r + 1, interests_.size() * 2);
  interests_.resize(size);
  for (auto& n : nodes_) n.interests.resize(size);
}

bool IdealEpidemicStrategy::has_interest(NodeId n, RequestId r) const {
  const auto& bits = nodes_.at(n).interests;
  return r < bits.size() && bits.test(r);
}

bool IdealEpidemicStrategy::has_data(NodeId n, ContentId c) const {
  return nodes_.at(n).data.test(c);
}

void IdealEpidemicStrategy::on_request(Network& net, NodeId consumer, const InterestPacket& i) {
  ensure_request_slot(i.request_id);
  interests_[i.request_id] = i;
  NodeState& n = nodes_[consumer];
  if (n.data.test(i.content) || catalog_->holder(i.content) == consumer) {
    RequestId r[1] = {i.request_id};
    net.deliver_to_app(consumer, r, n.data.test(i.content) ? n.data_hops[i.content] : 0);
    return;
  }
  n.waiting.emplace(i.content, i.request_id);
  accept_interest(net, consumer, i);
}

void IdealEpidemicStrategy::on_contact_start(Network& net, NodeId self, NodeId peer) {
  const NodeState& me = nodes_[self];
  const NodeState& other = nodes_[peer];
  boost::dynamic_bitset<> want = me.interests - other.interests;
  for (auto r = want.find_first(); r != want.npos; r = want.find_next(r))
    net.send(self, peer, interests_[r]);
  boost::dynamic_bitset<> give = me.data - other.data;
  for (auto c = give.find_first(); c != give.npos; c = give.find_next(c)) {
    auto cid = static_cast<ContentId>(c);
    net.send(self, peer, DataPacket{cid, sizes_.chunk, me.data_hops[c], {}});
  }
}

void IdealEpidemicStrategy::on_packet(Network& net, NodeId self, NodeId, const Packet& p) {
  if (kind_of(p) == PacketKind::interest)
    accept_interest(net, self, std::get<InterestPacket>(p));
  else if (kind_of(p) == PacketKind::data)
    accept_data(net, self, std::get<DataPacket>(p));
}

bool IdealEpidemicStrategy::still_useful(NodeId, NodeId to, const Packet& p) const {
  if (kind_of(p) == PacketKind::interest)
    return !has_interest(to, std::get<InterestPacket>(p).request_id);
  if (kind_of(p) == PacketKind::data) return !has_data(to, std::get<DataPacket>(p).content);
  return true;
}

void IdealEpidemicStrategy::accept_interest(Network& net, NodeId self, const InterestPacket& in) {
  ensure_request_slot(in.request_id);
  NodeState& n = nodes_[self];
  if (n.interests.test(in.request_id)) return;
  n.interests.set(in.request_id);
  flood(net, self, in, self);
  if (catalog_->holder(in.content) == self && !n.data.test(in.content))
    accept_data(net, self, DataPacket{in.content, sizes_.chunk, 0, {}});
}

void IdealEpidemicStrategy::accept_data(Network& net, NodeId self, const DataPacket& d) {
  NodeState& n = nodes_[self];
  if (n.data.test(d.content)) return;
  n.data.set(d.content);
  n.data_hops[d.content] = d.hop_count;
  auto [lo, hi] = n.waiting.equal_range(d.content);
  if (lo != hi) {
    std::vector<RequestId> served;
    for (auto it = lo; it != hi; ++it) served.push_back(it->second);
    n.waiting.erase(lo, hi);
    net.deliver_to_app(self, served, d.hop_count);
  }
  DataPacket copy = d;
  copy.satisfies.clear();
  flood(net, self, copy, self);
}

void IdealEpidemicStrategy::flood(Network& net, NodeId self, const Packet& p, NodeId except) {
  for (NodeId q : net.neighbors(self))
    if (q != except && still_useful(self, q, p)) net.send(self, q, p);
}

// ---------------------------------------------------------------------------
// Limited epidemic
// ---------------------------------------------------------------------------

LimitedEpidemicStrategy::LimitedEpidemicStrategy(const StrategyConfig& cfg, const RunContext& ctx)
    : cfg_(cfg),
      catalog_(ctx.catalog),
      sizes_(ctx.sizes),
      pit_lifetime_(ctx.pit_lifetime_s),
      seed_(ctx.seed),
      nodes_(ctx.n_nodes),
      pick_rng_(splitmix64(ctx.seed ^ 0x6c696d69746564ULL)) {
  for (auto& n : nodes_) n.ds = DataStore(catalog_->size());
  for (ContentId c = 0; c < catalog_->size(); ++c) nodes_[catalog_->holder(c)].ds.add(c);
}

bool LimitedEpidemicStrategy::draw(NodeId node, RequestId request) const {
  std::uint64_t h = splitmix64(seed_ ^ splitmix64((static_cast<std::uint64_t>(node) << 32) | request));
  double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return u < cfg_.epidemic_r;
}

bool LimitedEpidemicStrategy::forwarded(NodeId node, RequestId request) const {
  return nodes_.at(node).forwarded.count(request) > 0;
}

void LimitedEpidemicStrategy::on_request(Network& net, NodeId consumer, const InterestPacket& i) {
  handle_interest(net, consumer, i, kLocalApp);
}

void LimitedEpidemicStrategy::on_packet(Network& net, NodeId self, NodeId from, const Packet& p) {
  if (kind_of(p) == PacketKind::interest)
    handle_interest(net, self, std::get<InterestPacket>(p), from);
  else if (kind_of(p) == PacketKind::data)
    handle_data(net, self, from, std::get<DataPacket>(p));
}

void LimitedEpidemicStrategy::on_contact_start(Network& net, NodeId self, NodeId peer) {
  NodeState& n = nodes_[self];
  for (ContentId c : n.cs.owed_to(peer)) {
    CsEntry* e = n.cs.find(c);
    auto f = std::find_if(e->pending.begin(), e->pending.end(),
                          [peer](const PitFace& x) { return x.face == peer; });
    DataPacket d = e->data;
    d.satisfies = f->request_ids;
    n.cs.mark_in_flight(c, peer);
    net.send(self, peer, std::move(d));
  }
  std::vector<Waiting> still;
  for (const Waiting& w : std::exchange(n.waiting, {})) {
    if (w.from == peer || !n.pit.find(w.interest.content))
      still.push_back(w);
    else
      forward_now(net, self, w, peer);
  }
  std::erase_if(still, [&](const Waiting& w) { return !n.pit.find(w.interest.content); });
  n.waiting = std::move(still);
}

void LimitedEpidemicStrategy::on_sent(Network&, NodeId self, NodeId to, const Packet& p) {
  if (kind_of(p) != PacketKind::data) return;
  NodeState& n = nodes_[self];
  ContentId c = std::get<DataPacket>(p).content;
  const CsEntry* e = n.cs.find(c);
  if (e && e->is_in_flight(to)) n.cs.mark_served(c, to);
}

void LimitedEpidemicStrategy::handle_interest(Network& net, NodeId self, const InterestPacket& in,
                                              Face from) {
  NodeState& n = nodes_[self];
  const ContentId c = in.content;
  const RequestId r = in.request_id;
  auto reply = [&](DataPacket d) {
    d.satisfies = {r};
    if (from == kLocalApp) {
      net.deliver_to_app(self, d.satisfies, d.hop_count);
    } else if (net.in_contact(self, from)) {
      net.send(self, from, std::move(d));
    }
  };
  if (n.ds.holds(c)) {
    reply(DataPacket{c, sizes_.chunk, 0, {}});
    return;
  }
  if (const CsEntry* cs = n.cs.find(c)) {
    reply(cs->data);
    return;
  }
  if (n.forwarded.count(r) || n.dropped.count(r)) return;
  if (std::any_of(n.waiting.begin(), n.waiting.end(),
                  [r](const Waiting& w) { return w.interest.request_id == r; }))
    return;

  if (PitEntry* e = n.pit.find(c); e && n.pit.is_expired(*e, net.now(), pit_lifetime_))
    n.pit.erase(c);
  n.pit.upsert(in, from, net.now());

  if (from != kLocalApp && !draw(self, r)) {
    n.dropped.insert(r);
    return;
  }
  Waiting w{in, from};
  std::vector<NodeId> eligible;
  for (NodeId q : net.neighbors(self))
    if (q != from) eligible.push_back(q);
  if (eligible.empty()) {
    n.waiting.push_back(w);
    return;
  }
  std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
  forward_now(net, self, w, eligible[pick(pick_rng_)]);
}

void LimitedEpidemicStrategy::forward_now(Network& net, NodeId self, const Waiting& w, NodeId to) {
  nodes_[self].forwarded.insert(w.interest.request_id);
  net.send(self, to, w.interest);
}

void LimitedEpidemicStrategy::handle_data(Network& net, NodeId self, NodeId from,
                                          const DataPacket& d) {
  NodeState& n = nodes_[self];
  if (!n.pit.find(d.content)) return;
  auto faces = pit_satisfy(n.pit, n.cs, d, net.now());
  std::erase_if(n.waiting, [&](const Waiting& w) { return w.interest.content == d.content; });
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

}  // namespace mobccn
