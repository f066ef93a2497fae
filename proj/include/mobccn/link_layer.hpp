#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mobccn/ids.hpp"
#include "mobccn/packets.hpp"

namespace mobccn {

// How a node's channel bandwidth is divided among its contacts.
//   sender_degree: rate(s->r) = B / degree(s)
//   clique:        rate(s->r) = B / (degree(s) + degree(r) - 1), i.e. every
//                  contact touching either endpoint shares the channel
enum class Sharing { sender_degree, clique };

struct Transfer {
  NodeId from = 0;
  NodeId to = 0;
  Packet packet;
  std::uint64_t size_bytes = 0;
  bool is_retx = false;
  // Non-zero keys dedupe: a transfer is not queued twice on the same link.
  std::uint64_t dedupe_key = 0;
};

struct CompletedTransfer {
  Transfer transfer;
  Seconds started_at = 0;
  Seconds completed_at = 0;
  // Bytes moved during each contact the transfer spanned.
  std::vector<double> segment_bytes;
};

// Finite-bandwidth fluid model of every directed link. Each link sends one
// packet at a time, FIFO within priority class (Data, then Interest, then
// Hello). A transfer interrupted by the end of a contact keeps its remaining
// bytes and resumes at the next contact of the same pair.
class LinkLayer {
 public:
  using UsefulFn = std::function<bool(const Transfer&)>;

  LinkLayer(std::size_t n_nodes, double bandwidth_bps, Sharing sharing);

  void set_useful_check(UsefulFn fn) { useful_ = std::move(fn); }

  void contact_up(NodeId a, NodeId b, Seconds now);
  // Unsent and half-sent Hellos of the pair are discarded; everything else
  // waits for the next contact of the same pair.
  void contact_down(NodeId a, NodeId b, Seconds now);
  // The link must be up. Returns false when deduplicated away.
  bool enqueue(Transfer t);
  // Starts the next queued transfer on every idle link touched since the
  // last call.
  void pump(Seconds now);

  // +inf when nothing is in flight.
  Seconds next_completion() const;
  // Finishes the earliest in-flight transfer; `now` must equal next_completion().
  CompletedTransfer complete_next(Seconds now);

  // Current rate of s->r in bytes per second (0 when the contact is down).
  double rate(NodeId from, NodeId to) const;
  std::size_t degree(NodeId n) const { return degree_[n]; }
  std::size_t backlog(NodeId from, NodeId to) const;
  std::optional<double> remaining(NodeId from, NodeId to) const;

 private:
  struct InFlight {
    Transfer transfer;
    double remaining = 0;
    Seconds started_at = 0;
    std::vector<double> segments;
  };

  struct Link {
    bool active = false;
    double rate = 0;  // bytes/s
    Seconds last_update = 0;
    std::optional<InFlight> head;
    std::deque<Transfer> queues[3];
    std::unordered_set<std::uint64_t> keys;
    std::optional<Seconds> scheduled;  // completion time registered in done_
  };

  using Key = std::uint64_t;
  Key key(NodeId from, NodeId to) const {
    return static_cast<Key>(from) * n_nodes_ + static_cast<Key>(to);
  }
  Link& link(NodeId from, NodeId to);

  void settle(Link& l, Seconds now);
  void reschedule(Key k, Link& l);
  void start_next(Link& l, Seconds now);
  double share(NodeId from, NodeId to) const;
  // Links whose rate depends on the degree of n.
  std::vector<std::pair<NodeId, NodeId>> affected_by(NodeId n) const;

  std::size_t n_nodes_;
  double bytes_per_s_;
  Sharing sharing_;
  UsefulFn useful_;
  std::vector<std::size_t> degree_;
  std::vector<std::set<NodeId>> nbrs_;
  std::unordered_map<Key, Link> links_;
  std::set<std::pair<Seconds, Key>> done_;
  std::set<Key> idle_;
};

}  // namespace mobccn
