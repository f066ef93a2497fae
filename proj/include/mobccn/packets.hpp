#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "mobccn/ids.hpp"

namespace mobccn {

// Bytes charged per packet for traffic accounting and finite-bandwidth
// transfer times.
struct PacketSizes {
  std::uint32_t interest = 50;
  std::uint32_t hello_header = 32;
  std::uint32_t hello_per_advert = 24;
  std::uint64_t chunk = 2'000'000;  // 2 MB = 16 Mbit
};

struct InterestPacket {
  ContentId content = 0;
  NodeId origin = 0;
  RequestId request_id = 0;
  std::uint32_t hop_count = 0;
  std::uint32_t size_bytes = 50;
};

struct DataPacket {
  ContentId content = 0;
  std::uint64_t size_bytes = 0;
  std::uint32_t hop_count = 0;
  std::vector<RequestId> satisfies;
};

struct Advert {
  ContentId content = 0;
  double utility = 0.0;
  NodeId best_node = 0;
};

struct HelloPacket {
  NodeId sender = 0;
  std::vector<Advert> adverts;
  std::uint32_t size_bytes = 0;
};

HelloPacket make_hello(NodeId sender, std::vector<Advert> adverts,
                       const PacketSizes& sizes);

enum class PacketKind : std::uint8_t { interest = 0, data = 1, hello = 2 };

using Packet = std::variant<InterestPacket, DataPacket, HelloPacket>;

PacketKind kind_of(const Packet& p);
std::uint64_t size_of(const Packet& p);
const char* to_string(PacketKind k);

}  // namespace mobccn
