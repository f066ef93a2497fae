#include "mobccn/utility.hpp"

#include <algorithm>
#include <stdexcept>

namespace mobccn {

IctEstimator::IctEstimator(NodeId self, std::size_t n_nodes, IctMode mode, double alpha)
    : self_(self), mode_(mode), alpha_(alpha), peers_(n_nodes) {}

std::optional<Seconds> IctEstimator::record_contact_start(NodeId peer, Seconds now) {
  if (peer == self_) throw std::invalid_argument("contact with self");
  PeerStats& s = peers_.at(peer);
  if (!s.last_end) return std::nullopt;
  Seconds gap = now - *s.last_end;
  if (gap <= 0) return std::nullopt;
  ++s.count;
  if (mode_ == IctMode::mean || s.count == 1)
    s.mean += (gap - s.mean) / s.count;
  else
    s.mean = alpha_ * gap + (1 - alpha_) * s.mean;
  return gap;
}

void IctEstimator::record_contact_end(NodeId peer, Seconds now) { peers_.at(peer).last_end = now; }

std::optional<Seconds> IctEstimator::mean_ict(NodeId peer) const {
  const PeerStats& s = peers_.at(peer);
  if (s.count == 0) return std::nullopt;
  return s.mean;
}

double direct_utility(std::optional<Seconds> mean_ict) {
  if (!mean_ict || *mean_ict <= 0) return 0.0;
  return 1.0 / *mean_ict;
}

double indirect_utility(double u_q, Seconds ict_pq) {
  if (u_q <= 0) return 0.0;
  if (ict_pq == 0) return u_q;
  return 1.0 / (1.0 / u_q + ict_pq);
}

UtilityState::UtilityState(NodeId self, std::size_t n_contents)
    : self_(self), direct_(n_contents, 0.0), seeded_(n_contents, false), indirect_(n_contents) {}

void UtilityState::seed_holder(ContentId c, double value) {
  direct_.at(c) = value;
  seeded_.at(c) = true;
}

UtilityUpdate UtilityState::recompute_global(ContentId c, NodeId peer, double advertised,
                                             const IctEstimator& est, bool peer_is_holder) {
  auto pos = std::lower_bound(encountered_.begin(), encountered_.end(), peer);
  if (pos == encountered_.end() || *pos != peer) encountered_.insert(pos, peer);

  auto ict = est.mean_ict(peer);
  if (peer_is_holder) {
    if (!seeded_[c]) direct_[c] = direct_utility(ict);
    return {direct_[c], global(c)};
  }
  double cand = ict ? indirect_utility(advertised, *ict) : 0.0;
  Indirect& best = indirect_[c];
  if (cand > best.value || best.via == peer) best = Indirect{cand, peer};
  return {cand, global(c)};
}

std::optional<NodeId> UtilityState::indirect_via(ContentId c) const {
  const Indirect& best = indirect_.at(c);
  if (best.via < 0 || best.value <= 0) return std::nullopt;
  return best.via;
}

double UtilityState::global(ContentId c) const { return std::max(direct_[c], indirect_[c].value); }

std::vector<Advert> UtilityState::adverts() const {
  std::vector<Advert> out;
  for (std::size_t c = 0; c < direct_.size(); ++c) {
    double g = global(static_cast<ContentId>(c));
    if (g <= 0) continue;
    NodeId best = direct_[c] >= indirect_[c].value ? self_ : indirect_[c].via;
    out.push_back(Advert{static_cast<ContentId>(c), g, best});
  }
  return out;
}

HelloPacket UtilityState::build_hello(const PacketSizes& sizes) const {
  return make_hello(self_, adverts(), sizes);
}

}  // namespace mobccn
