#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "mobccn/strategy.hpp"
#include "mobccn/tables.hpp"

namespace mobccn {

// Flooding benchmark: every contact exchanges every Interest and every Data
// the peer lacks (summary-vector anti-entropy). Unlimited buffers.
class IdealEpidemicStrategy final : public Strategy {
 public:
  explicit IdealEpidemicStrategy(const RunContext& ctx);

  void on_contact_start(Network& net, NodeId self, NodeId peer) override;
  void on_contact_end(Network&, NodeId, NodeId) override {}
  void on_packet(Network& net, NodeId self, NodeId from, const Packet& p) override;
  void on_request(Network& net, NodeId consumer, const InterestPacket& i) override;
  bool still_useful(NodeId from, NodeId to, const Packet& p) const override;

  bool has_interest(NodeId n, RequestId r) const;
  bool has_data(NodeId n, ContentId c) const;

 private:
  struct NodeState {
    boost::dynamic_bitset<> interests;  // by request id
    boost::dynamic_bitset<> data;       // by content id
    std::vector<std::uint32_t> data_hops;
    std::multimap<ContentId, RequestId> waiting;  // own requests not yet served
  };

  void ensure_request_slot(RequestId r);
  void accept_interest(Network& net, NodeId self, const InterestPacket& in);
  void accept_data(Network& net, NodeId self, const DataPacket& d);
  void flood(Network& net, NodeId self, const Packet& p, NodeId except);

  const ContentCatalog* catalog_;
  PacketSizes sizes_;
  std::vector<NodeState> nodes_;
  std::vector<InterestPacket> interests_;  // by request id, as issued
};

// Copy-limited benchmark. An Interest is forwarded at most once per node:
// the origin always forwards it, an intermediate node forwards it with
// probability r (one cached draw per node and request), to a single peer.
// Data returns over the reverse path exactly as in MobCCN.
class LimitedEpidemicStrategy final : public Strategy {
 public:
  LimitedEpidemicStrategy(const StrategyConfig& cfg, const RunContext& ctx);

  void on_contact_start(Network& net, NodeId self, NodeId peer) override;
  void on_contact_end(Network&, NodeId, NodeId) override {}
  void on_packet(Network& net, NodeId self, NodeId from, const Packet& p) override;
  void on_sent(Network& net, NodeId self, NodeId to, const Packet& p) override;
  void on_request(Network& net, NodeId consumer, const InterestPacket& i) override;

  // The cached Bernoulli draw of `node` for `request`.
  bool draw(NodeId node, RequestId request) const;
  bool forwarded(NodeId node, RequestId request) const;

 private:
  struct Waiting {
    InterestPacket interest;
    Face from;
  };
  struct NodeState {
    Pit pit;
    ContentStore cs;
    DataStore ds;
    std::set<RequestId> forwarded;
    std::set<RequestId> dropped;
    std::vector<Waiting> waiting;  // accepted, waiting for a peer
  };

  void handle_interest(Network& net, NodeId self, const InterestPacket& in, Face from);
  void handle_data(Network& net, NodeId self, NodeId from, const DataPacket& d);
  void forward_now(Network& net, NodeId self, const Waiting& w, NodeId to);

  StrategyConfig cfg_;
  const ContentCatalog* catalog_;
  PacketSizes sizes_;
  Seconds pit_lifetime_;
  std::uint64_t seed_;
  std::vector<NodeState> nodes_;
  mutable std::mt19937_64 pick_rng_;
};

}  // namespace mobccn
