#include "mobccn/packets.hpp"

namespace mobccn {

HelloPacket make_hello(NodeId sender, std::vector<Advert> adverts, const PacketSizes& sizes) {
  HelloPacket h;
  h.sender = sender;
  h.size_bytes = sizes.hello_header + sizes.hello_per_advert * static_cast<std::uint32_t>(adverts.size());
  h.adverts = std::move(adverts);
  return h;
}

PacketKind kind_of(const Packet& p) { return static_cast<PacketKind>(p.index()); }

std::uint64_t size_of(const Packet& p) {
  return std::visit([](const auto& x) -> std::uint64_t { return x.size_bytes; }, p);
}

const char* to_string(PacketKind k) {
  switch (k) {
    case PacketKind::interest: return "interest";
    case PacketKind::data: return "data";
    case PacketKind::hello: return "hello";
  }
  return "?";
}

}  // namespace mobccn
