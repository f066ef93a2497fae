#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mobccn/strategy.hpp"
#include "mobccn/tables.hpp"
#include "mobccn/utility.hpp"

namespace mobccn {

struct Candidate {
  NodeId node = 0;
  double utility = 0.0;

  bool operator==(const Candidate&) const = default;
};

// Every node known through the FIB or the CNU with a positive utility for
// `c`. A node present in both tables counts once with its larger value.
// Sorted by utility (descending), ties by node id (ascending).
std::vector<Candidate> rank_candidates(const Fib& fib, const CnuTable& cnu, ContentId c);

std::optional<Candidate> select_best_forwarder(const Fib& fib, const CnuTable& cnu,
                                               ContentId c);
std::optional<Candidate> select_second_best(const Fib& fib, const CnuTable& cnu,
                                            ContentId c);

// Forwarding gate of the hysteresis variant. Strict: equality blocks.
inline bool passes_hysteresis(double u_candidate, double u_self, double hyst_percent) {
  return u_candidate > u_self * (1.0 + hyst_percent / 100.0);
}

enum class StoreReason { no_neighbor_best, hysteresis_blocked, awaiting_second_best };

struct StoredInterest {
  InterestPacket interest;
  Seconds stored_at = 0;
  StoreReason reason = StoreReason::no_neighbor_best;
  bool retransmission = false;
};

// Interests waiting for a suitable forwarder. At most one item per
// (content, retransmission) pair; a never-sent first transmission absorbs
// later retransmission requests for the same content.
class StoredInterestQueue {
 public:
  void store(const InterestPacket& i, Seconds now, StoreReason reason, bool retransmission);
  void remove(ContentId c);
  bool contains(ContentId c) const;
  std::vector<StoredInterest> take_all();
  void put_back(std::vector<StoredInterest> items);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<StoredInterest>& items() const { return items_; }

 private:
  std::vector<StoredInterest> items_;
};

struct NodeState {
  NodeId id = 0;
  Pit pit;
  ContentStore cs;
  Fib fib;
  CnuTable cnu;
  DataStore ds;
  IctEstimator ict;
  UtilityState utility;
  StoredInterestQueue stored;
};

struct MobCcnCounters {
  std::uint64_t dropped_no_route = 0;
  std::uint64_t dropped_unsolicited = 0;
  std::uint64_t expired_pit = 0;
  std::uint64_t stored = 0;
};

// MobCCN with the retransmission strategy selected by StrategyConfig::variant
// (basic, r1, r2, a, ah).
class MobCcnStrategy final : public Strategy {
 public:
  MobCcnStrategy(const StrategyConfig& cfg, const RunContext& ctx);

  void on_contact_start(Network& net, NodeId self, NodeId peer) override;
  void on_contact_end(Network& net, NodeId self, NodeId peer) override;
  void on_packet(Network& net, NodeId self, NodeId from, const Packet& p) override;
  void on_sent(Network& net, NodeId self, NodeId to, const Packet& p) override;
  void on_request(Network& net, NodeId consumer, const InterestPacket& i) override;
  void on_timer(Network& net, NodeId self) override;
  std::optional<Seconds> timer_period() const override;
  bool still_useful(NodeId from, NodeId to, const Packet& p) const override;

  const NodeState& node(NodeId n) const { return nodes_.at(n); }
  const MobCcnCounters& counters() const { return counters_; }
  const StrategyConfig& config() const { return cfg_; }

 private:
  enum class Target { best, second_best };

  void handle_interest(Network& net, NodeId self, const InterestPacket& in, Face from);
  void handle_data(Network& net, NodeId self, NodeId from, const DataPacket& d);
  void handle_hello(Network& net, NodeId self, NodeId from, const HelloPacket& h);

  // Attempts to put first_interest of the PIT entry on the air towards the
  // chosen target. Stores it when the target is not reachable now.
  void try_forward(Network& net, NodeState& n, PitEntry& e, Target target, bool retransmission);
  // Drops the entry when its lifetime is over. Returns true if dropped.
  bool expire(NodeState& n, ContentId c, Seconds now);
  // Best (or second best) candidate, never one of the entry's own faces.
  // The second best is the best node other than the first transmission's
  // target.
  std::optional<Candidate> resolve(const NodeState& n, const PitEntry& e, Target target) const;
  bool may_send(const Network& net, const NodeState& n, const Candidate& cand,
                ContentId c) const;
  void send_interest(Network& net, NodeState& n, PitEntry& e, NodeId to, bool retransmission);

  void reevaluate_stored(Network& net, NodeState& n);
  void flush_owed_data(Network& net, NodeState& n, NodeId peer);
  void reply_with(Network& net, NodeState& n, const DataPacket& stored, Face to,
                  RequestId request);

  StrategyConfig cfg_;
  const ContentCatalog* catalog_;
  PacketSizes sizes_;
  Seconds pit_lifetime_;
  std::vector<NodeState> nodes_;
  MobCcnCounters counters_;
};

}  // namespace mobccn
