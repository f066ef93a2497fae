#pragma once

#include <optional>
#include <vector>

#include "mobccn/ids.hpp"
#include "mobccn/packets.hpp"

namespace mobccn {

enum class IctMode { mean, ewma };

// Per-peer inter-contact time estimator. A gap is measured from the end of
// one contact with a peer to the start of the next one.
class IctEstimator {
 public:
  IctEstimator() = default;
  IctEstimator(NodeId self, std::size_t n_nodes, IctMode mode = IctMode::mean,
               double alpha = 0.2);

  // Returns the gap sample recorded, if any. Zero-length gaps are treated
  // as a continuation of the previous contact and not sampled.
  std::optional<Seconds> record_contact_start(NodeId peer, Seconds now);
  void record_contact_end(NodeId peer, Seconds now);

  std::optional<Seconds> mean_ict(NodeId peer) const;
  std::uint32_t samples(NodeId peer) const { return peers_.at(peer).count; }

 private:
  struct PeerStats {
    std::optional<Seconds> last_end;
    std::uint32_t count = 0;
    double mean = 0.0;
  };

  NodeId self_ = 0;
  IctMode mode_ = IctMode::mean;
  double alpha_ = 0.2;
  std::vector<PeerStats> peers_;
};

// U(d) = 1 / ICT; zero without any sample.
double direct_utility(std::optional<Seconds> mean_ict);

// U(ind) = 1 / (1/U_q + ICT(p,q)); exactly U_q for a zero ICT and exactly 0
// for U_q = 0.
double indirect_utility(double u_q, Seconds ict_pq);

struct UtilityUpdate {
  double route_utility;  // p's utility through the peer (stored in the FIB)
  double global;         // p's global utility after the update
};

// Utility of one node towards every content of the run.
class UtilityState {
 public:
  UtilityState() = default;
  UtilityState(NodeId self, std::size_t n_contents);

  // Marks the content as held in the DS with a fixed direct utility.
  void seed_holder(ContentId c, double value);
  bool is_seeded(ContentId c) const { return seeded_[c]; }

  // Processes one advert from `peer`. When the peer holds the content the
  // direct component is refreshed; otherwise the indirect candidate through
  // the peer replaces the current best if it is larger or comes from the same
  // peer as the current best.
  UtilityUpdate recompute_global(ContentId c, NodeId peer, double advertised,
                                 const IctEstimator& est, bool peer_is_holder);

  double direct(ContentId c) const { return direct_[c]; }
  double indirect(ContentId c) const { return indirect_[c].value; }
  std::optional<NodeId> indirect_via(ContentId c) const;
  double global(ContentId c) const;

  // One advert per content with positive global utility.
  std::vector<Advert> adverts() const;
  HelloPacket build_hello(const PacketSizes& sizes) const;

  const std::vector<NodeId>& encountered() const { return encountered_; }
  std::size_t contents() const { return direct_.size(); }

 private:
  struct Indirect {
    double value = 0.0;
    NodeId via = -1;
  };

  NodeId self_ = 0;
  std::vector<double> direct_;
  std::vector<bool> seeded_;
  std::vector<Indirect> indirect_;
  std::vector<NodeId> encountered_;  // sorted
};

}  // namespace mobccn
