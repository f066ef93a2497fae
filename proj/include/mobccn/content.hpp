#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobccn/ids.hpp"

namespace mobccn {

// One chunk of one content type of one producer: the unit one Interest asks for.
struct ContentName {
  NodeId producer = 0;
  std::uint16_t type = 0;
  std::uint16_t chunk = 0;

  auto operator<=>(const ContentName&) const = default;

  // "/p<producer>/t<type>/c<chunk>"
  std::string to_string() const;
};

// Dense numbering of every name in a run. Ids follow the total order of
// ContentName, so iterating ids is iterating names in order.
class ContentCatalog {
 public:
  ContentCatalog() = default;
  ContentCatalog(std::vector<NodeId> producers, int types_per_producer,
                 int chunks_per_type);

  std::size_t size() const { return producers_.size() * per_producer(); }
  std::size_t per_producer() const {
    return static_cast<std::size_t>(types_) * static_cast<std::size_t>(chunks_);
  }
  int types_per_producer() const { return types_; }
  int chunks_per_type() const { return chunks_; }
  std::span<const NodeId> producers() const { return producers_; }

  std::optional<ContentId> find(const ContentName& name) const;
  ContentId id_of(const ContentName& name) const;  // throws std::out_of_range
  ContentName name_of(ContentId id) const;
  NodeId holder(ContentId id) const { return producers_[id / per_producer()]; }
  std::vector<ContentId> contents_of(NodeId producer) const;

 private:
  std::vector<NodeId> producers_;  // sorted, unique
  int types_ = 0;
  int chunks_ = 0;
};

}  // namespace mobccn
