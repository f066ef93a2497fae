#include "mobccn/tables.hpp"

#include <algorithm>
#include <stdexcept>

namespace mobccn {

bool PitEntry::has_face(Face f) const {
  return std::any_of(faces.begin(), faces.end(), [f](const PitFace& x) { return x.face == f; });
}

PitUpsertResult Pit::upsert(const InterestPacket& interest, Face from, Seconds now) {
  auto [it, fresh] = entries_.try_emplace(interest.content);
  PitEntry& e = it->second;
  if (fresh) {
    e.content = interest.content;
    e.faces.push_back(PitFace{from, now, {interest.request_id}});
    e.arrival_count = 1;
    e.created_at = now;
    e.first_interest = interest;
    return {PitUpsert::created, 1};
  }
  ++e.arrival_count;
  auto f = std::find_if(e.faces.begin(), e.faces.end(),
                        [from](const PitFace& x) { return x.face == from; });
  if (f == e.faces.end()) {
    e.faces.push_back(PitFace{from, now, {interest.request_id}});
  } else if (std::find(f->request_ids.begin(), f->request_ids.end(), interest.request_id) ==
             f->request_ids.end()) {
    f->request_ids.push_back(interest.request_id);
  }
  return {PitUpsert::aggregated, e.arrival_count};
}

PitEntry* Pit::find(ContentId c) {
  auto it = entries_.find(c);
  return it == entries_.end() ? nullptr : &it->second;
}

const PitEntry* Pit::find(ContentId c) const {
  auto it = entries_.find(c);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Pit::erase(ContentId c) { return entries_.erase(c) > 0; }

bool CsEntry::owes(Face f) const {
  return std::any_of(pending.begin(), pending.end(), [f](const PitFace& x) { return x.face == f; });
}

bool CsEntry::is_in_flight(Face f) const {
  return std::find(in_flight.begin(), in_flight.end(), f) != in_flight.end();
}

void ContentStore::insert(const DataPacket& data, std::vector<PitFace> faces, Seconds now) {
  if (faces.empty()) return;
  auto [it, fresh] = entries_.try_emplace(data.content);
  CsEntry& e = it->second;
  if (fresh) {
    e.data = data;
    e.data.satisfies.clear();
    e.acquired_at = now;
  }
  for (auto& f : faces) {
    auto cur = std::find_if(e.pending.begin(), e.pending.end(),
                            [&](const PitFace& x) { return x.face == f.face; });
    if (cur == e.pending.end()) {
      e.pending.push_back(std::move(f));
      continue;
    }
    for (RequestId r : f.request_ids) {
      if (std::find(cur->request_ids.begin(), cur->request_ids.end(), r) == cur->request_ids.end())
        cur->request_ids.push_back(r);
    }
  }
}

ServeResult ContentStore::mark_served(ContentId c, Face f) {
  auto it = entries_.find(c);
  if (it == entries_.end()) {
    ++warnings_;
    return ServeResult::not_found;
  }
  CsEntry& e = it->second;
  auto p = std::find_if(e.pending.begin(), e.pending.end(),
                        [f](const PitFace& x) { return x.face == f; });
  if (p == e.pending.end()) {
    ++warnings_;
    return ServeResult::not_found;
  }
  e.pending.erase(p);
  std::erase(e.in_flight, f);
  if (e.pending.empty()) {
    entries_.erase(it);
    return ServeResult::evicted;
  }
  return ServeResult::still_pending;
}

bool ContentStore::mark_in_flight(ContentId c, Face f) {
  auto it = entries_.find(c);
  if (it == entries_.end() || !it->second.owes(f) || it->second.is_in_flight(f)) return false;
  it->second.in_flight.push_back(f);
  return true;
}

CsEntry* ContentStore::find(ContentId c) {
  auto it = entries_.find(c);
  return it == entries_.end() ? nullptr : &it->second;
}

const CsEntry* ContentStore::find(ContentId c) const {
  auto it = entries_.find(c);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<ContentId> ContentStore::owed_to(Face f) const {
  std::vector<ContentId> out;
  for (const auto& [c, e] : entries_)
    if (e.owes(f) && !e.is_in_flight(f)) out.push_back(c);
  return out;
}

std::vector<PitFace> pit_satisfy(Pit& pit, ContentStore& cs, const DataPacket& data, Seconds now) {
  PitEntry* e = pit.find(data.content);
  if (!e) return {};
  std::vector<PitFace> faces = std::move(e->faces);
  pit.erase(data.content);
  cs.insert(data, faces, now);
  return faces;
}

void Fib::update(ContentId c, NodeId via, double utility, Seconds now) {
  if (utility < 0) throw std::invalid_argument("negative route utility");
  auto& rs = routes_.at(c);
  for (auto& r : rs) {
    if (r.via == via) {
      r.utility = utility;
      r.learned_at = now;
      return;
    }
  }
  rs.push_back(FibRoute{via, utility, now});
}

std::size_t Fib::apply_hello(const HelloPacket& hello, std::span<const double> computed,
                             Seconds now) {
  if (computed.size() != hello.adverts.size())
    throw std::invalid_argument("one computed utility per advert expected");
  for (std::size_t k = 0; k < computed.size(); ++k)
    update(hello.adverts[k].content, hello.sender, computed[k], now);
  return computed.size();
}

void CnuTable::set(NodeId neighbor, ContentId c, double utility) {
  auto [it, fresh] = by_neighbor_.try_emplace(neighbor);
  if (fresh) it->second.assign(n_contents_, -1.0);
  it->second.at(c) = utility;
}

void CnuTable::remove_neighbor(NodeId neighbor) { by_neighbor_.erase(neighbor); }

std::optional<double> CnuTable::get(NodeId neighbor, ContentId c) const {
  auto it = by_neighbor_.find(neighbor);
  if (it == by_neighbor_.end() || c >= it->second.size() || it->second[c] < 0) return std::nullopt;
  return it->second[c];
}

std::vector<ContentId> DataStore::owned() const {
  std::vector<ContentId> out;
  for (std::size_t c = 0; c < owned_.size(); ++c)
    if (owned_[c]) out.push_back(static_cast<ContentId>(c));
  return out;
}

}  // namespace mobccn
