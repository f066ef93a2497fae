#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mobccn/content.hpp"
#include "mobccn/ids.hpp"
#include "mobccn/packets.hpp"
#include "mobccn/utility.hpp"

namespace mobccn {

enum class Variant { basic, r1, r2, a, ah, ideal_epidemic, limited_epidemic };

// Canonical key used in configs and reports, e.g. "MobCCN_AH".
std::string_view to_string(Variant v);
// Accepts the canonical keys plus short forms ("AH", "ideal", ...),
// case-insensitively.
std::optional<Variant> parse_variant(std::string_view s);
bool is_mobccn(Variant v);

struct StrategyConfig {
  Variant variant = Variant::basic;
  std::uint32_t retx_threshold = 0;  // R1, R2
  Seconds t_ageing_s = 40000;        // A, AH
  double hyst_percent = 55;          // AH
  double epidemic_r = 0.5;           // limited epidemic
  bool strict_cnu_fib_match = false;

  std::string label() const { return std::string(to_string(variant)); }
};

// What a strategy may ask of the kernel while reacting to an event.
class Network {
 public:
  virtual ~Network() = default;

  virtual Seconds now() const = 0;
  virtual bool in_contact(NodeId a, NodeId b) const = 0;
  virtual std::span<const NodeId> neighbors(NodeId n) const = 0;

  // `from` and `to` must be in contact.
  virtual void send(NodeId from, NodeId to, Packet packet, bool is_retx = false) = 0;

  // Hands a Data to the application of `consumer` for the given requests.
  virtual void deliver_to_app(NodeId consumer, std::span<const RequestId> requests,
                              std::uint32_t hop_count) = 0;
};

// Static facts about one run that every strategy needs.
struct RunContext {
  std::size_t n_nodes = 0;
  const ContentCatalog* catalog = nullptr;
  PacketSizes sizes;
  Seconds pit_lifetime_s = 86400;
  IctMode ict_mode = IctMode::mean;
  double ict_alpha = 0.2;
  std::uint64_t seed = 0;
  // Seeded direct utility of each content at its holder, indexed by ContentId.
  std::vector<double> holder_utility;
};

// Per-node protocol behaviour. All callbacks run on the kernel thread.
class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual void on_contact_start(Network& net, NodeId self, NodeId peer) = 0;
  virtual void on_contact_end(Network& net, NodeId self, NodeId peer) = 0;
  virtual void on_packet(Network& net, NodeId self, NodeId from, const Packet& p) = 0;
  // A transfer from `self` to `to` finished.
  virtual void on_sent(Network&, NodeId /*self*/, NodeId /*to*/, const Packet&) {}
  virtual void on_request(Network& net, NodeId consumer, const InterestPacket& i) = 0;
  virtual void on_timer(Network&, NodeId /*self*/) {}

  // Period of the per-node timer, if the strategy uses one.
  virtual std::optional<Seconds> timer_period() const { return std::nullopt; }

  // Checked right before a queued transfer starts; a transfer that is no
  // longer useful is dropped without using the channel.
  virtual bool still_useful(NodeId /*from*/, NodeId /*to*/, const Packet&) const { return true; }
};

std::unique_ptr<Strategy> make_strategy(const StrategyConfig& cfg, const RunContext& ctx);

}  // namespace mobccn
