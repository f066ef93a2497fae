#include "mobccn/content.hpp"

#include <algorithm>
#include <stdexcept>

namespace mobccn {

std::string ContentName::to_string() const {
  return "/p" + std::to_string(producer) + "/t" + std::to_string(type) + "/c" +
         std::to_string(chunk);
}

ContentCatalog::ContentCatalog(std::vector<NodeId> producers, int types_per_producer,
                               int chunks_per_type)
    : producers_(std::move(producers)), types_(types_per_producer), chunks_(chunks_per_type) {
  if (types_ <= 0 || chunks_ <= 0) throw std::invalid_argument("catalog needs types and chunks");
  std::sort(producers_.begin(), producers_.end());
  producers_.erase(std::unique(producers_.begin(), producers_.end()), producers_.end());
}

std::optional<ContentId> ContentCatalog::find(const ContentName& name) const {
  auto it = std::lower_bound(producers_.begin(), producers_.end(), name.producer);
  if (it == producers_.end() || *it != name.producer) return std::nullopt;
  if (name.type >= types_ || name.chunk >= chunks_) return std::nullopt;
  auto p = static_cast<std::size_t>(it - producers_.begin());
  return static_cast<ContentId>(p * per_producer() + name.type * chunks_ + name.chunk);
}

ContentId ContentCatalog::id_of(const ContentName& name) const {
  auto id = find(name);
  if (!id) throw std::out_of_range("unknown content " + name.to_string());
  return *id;
}

ContentName ContentCatalog::name_of(ContentId id) const {
  if (id >= size()) throw std::out_of_range("content id out of range");
  std::size_t local = id % per_producer();
  return ContentName{producers_[id / per_producer()], static_cast<std::uint16_t>(local / chunks_),
                     static_cast<std::uint16_t>(local % chunks_)};
}

std::vector<ContentId> ContentCatalog::contents_of(NodeId producer) const {
  std::vector<ContentId> out;
  auto it = std::lower_bound(producers_.begin(), producers_.end(), producer);
  if (it == producers_.end() || *it != producer) return out;
  auto base = static_cast<ContentId>((it - producers_.begin()) * per_producer());
  for (std::size_t k = 0; k < per_producer(); ++k) out.push_back(base + static_cast<ContentId>(k));
  return out;
}

}  // namespace mobccn
