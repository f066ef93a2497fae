#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mobccn/ids.hpp"
#include "mobccn/packets.hpp"

namespace mobccn {

// ---------------------------------------------------------------------------
// PIT
// ---------------------------------------------------------------------------

struct PitFace {
  Face face = kLocalApp;
  Seconds arrived_at = 0;
  // Requests that reached this node through `face`. The first one is the
  // request of the Interest that created the face record.
  std::vector<RequestId> request_ids;
};

struct PitEntry {
  ContentId content = 0;
  std::vector<PitFace> faces;  // in order of first arrival, unique per face
  std::uint32_t arrival_count = 0;
  Seconds created_at = 0;
  InterestPacket first_interest;

  // Copies of first_interest this node has put on the air.
  std::uint32_t transmissions = 0;
  NodeId first_target = -1;
  Seconds last_retx_at = -std::numeric_limits<double>::infinity();

  bool has_face(Face f) const;
  // Interest arrivals beyond the first one.
  std::uint32_t duplicates() const { return arrival_count - 1; }
};

enum class PitUpsert { created, aggregated };

struct PitUpsertResult {
  PitUpsert kind;
  std::uint32_t arrival_count;
};

class ContentStore;

class Pit {
 public:
  using Map = std::map<ContentId, PitEntry>;

  // Creates the entry on first arrival; otherwise records the arrival,
  // adding the face only if it is new.
  PitUpsertResult upsert(const InterestPacket& interest, Face from, Seconds now);

  PitEntry* find(ContentId c);
  const PitEntry* find(ContentId c) const;
  bool erase(ContentId c);

  bool is_expired(const PitEntry& e, Seconds now, Seconds lifetime) const {
    return now - e.created_at > lifetime;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Map::iterator begin() { return entries_.begin(); }
  Map::iterator end() { return entries_.end(); }
  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }
  Map::iterator erase(Map::iterator it) { return entries_.erase(it); }

 private:
  Map entries_;
};

// ---------------------------------------------------------------------------
// Content store (non-permanent: an entry lives only while faces are owed)
// ---------------------------------------------------------------------------

struct CsEntry {
  DataPacket data;
  Seconds acquired_at = 0;
  std::vector<PitFace> pending;  // faces still owed this Data
  std::vector<Face> in_flight;   // subset of pending with a transfer underway

  bool owes(Face f) const;
  bool is_in_flight(Face f) const;
};

enum class ServeResult { still_pending, evicted, not_found };

class ContentStore {
 public:
  using Map = std::map<ContentId, CsEntry>;

  // Adds the faces to the entry for data.content, creating it if needed.
  // With no faces owed, nothing is kept.
  void insert(const DataPacket& data, std::vector<PitFace> faces, Seconds now);

  ServeResult mark_served(ContentId c, Face f);
  // Returns false when the face is not owed or already in flight.
  bool mark_in_flight(ContentId c, Face f);

  CsEntry* find(ContentId c);
  const CsEntry* find(ContentId c) const;

  // Contents owed to `f` with no transfer yet underway, in content order.
  std::vector<ContentId> owed_to(Face f) const;

  std::uint64_t warnings() const { return warnings_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }

 private:
  Map entries_;
  std::uint64_t warnings_ = 0;
};

// Satisfies the PIT entry for data.content: removes it and moves every owed
// face into the content store. Returns the faces owed (empty for unsolicited
// Data, which is not cached).
std::vector<PitFace> pit_satisfy(Pit& pit, ContentStore& cs,
                                 const DataPacket& data, Seconds now);

// ---------------------------------------------------------------------------
// FIB
// ---------------------------------------------------------------------------

struct FibRoute {
  NodeId via = 0;
  double utility = 0.0;
  Seconds learned_at = 0;
};

class Fib {
 public:
  Fib() = default;
  explicit Fib(std::size_t n_contents) : routes_(n_contents) {}

  // Inserts or overwrites the route via `via`. Utilities must be >= 0.
  void update(ContentId c, NodeId via, double utility, Seconds now);

  // Applies one Hello: advert k installs a route via the sender carrying
  // computed[k]. Returns the number of routes touched.
  std::size_t apply_hello(const HelloPacket& hello, std::span<const double> computed,
                          Seconds now);

  bool has_entry(ContentId c) const { return c < routes_.size() && !routes_[c].empty(); }
  std::span<const FibRoute> routes(ContentId c) const { return routes_[c]; }
  std::size_t contents() const { return routes_.size(); }

 private:
  std::vector<std::vector<FibRoute>> routes_;
};

// ---------------------------------------------------------------------------
// CNU: utilities advertised by the nodes currently in contact
// ---------------------------------------------------------------------------

class CnuTable {
 public:
  CnuTable() = default;
  explicit CnuTable(std::size_t n_contents) : n_contents_(n_contents) {}

  void set(NodeId neighbor, ContentId c, double utility);
  void remove_neighbor(NodeId neighbor);
  std::optional<double> get(NodeId neighbor, ContentId c) const;

  bool empty() const { return by_neighbor_.empty(); }
  std::size_t neighbors() const { return by_neighbor_.size(); }

  template <typename F>
  void for_each(ContentId c, F&& f) const {
    for (const auto& [n, utils] : by_neighbor_) {
      double u = utils[c];
      if (u >= 0.0) f(n, u);
    }
  }

 private:
  std::size_t n_contents_ = 0;
  std::map<NodeId, std::vector<double>> by_neighbor_;  // -1 marks "no advert"
};

// ---------------------------------------------------------------------------
// DS: contents held permanently
// ---------------------------------------------------------------------------

class DataStore {
 public:
  DataStore() = default;
  explicit DataStore(std::size_t n_contents) : owned_(n_contents, false) {}

  void add(ContentId c) { owned_.at(c) = true; }
  bool holds(ContentId c) const { return c < owned_.size() && owned_[c]; }
  std::vector<ContentId> owned() const;

 private:
  std::vector<bool> owned_;
};

}  // namespace mobccn
