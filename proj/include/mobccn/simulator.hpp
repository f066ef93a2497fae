#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "mobccn/ledger.hpp"
#include "mobccn/link_layer.hpp"
#include "mobccn/strategy.hpp"
#include "mobccn/trace.hpp"
#include "mobccn/workload.hpp"

namespace mobccn {

struct SimConfig {
  Seconds duration_s = 129600;
  Seconds pit_lifetime_s = 86400;
  std::optional<double> bandwidth_bps;  // empty: infinite bandwidth
  Sharing sharing = Sharing::sender_degree;
  PacketSizes sizes;
  IctMode ict_mode = IctMode::mean;
  double ict_alpha = 0.2;
};

// Events sharing a timestamp run in this order, then by insertion.
enum class EventKind : std::uint8_t {
  contact_end = 1,
  contact_start = 2,
  request_issue = 3,
  timer_fire = 4,
  sim_end = 5,
};

struct Event {
  Seconds time = 0;
  EventKind kind = EventKind::sim_end;
  std::uint64_t seq = 0;
  std::int64_t a = 0;  // contact index / request index / node
};

// One run: owns the strategy and replays the trace and workload through it.
class Simulator final : private Network {
 public:
  Simulator(const ContactTrace& trace, const Workload& workload, const StrategyConfig& strategy,
            const SimConfig& cfg, std::uint64_t seed);
  // Runs a caller-built strategy instead of one made from a StrategyConfig.
  Simulator(const ContactTrace& trace, const Workload& workload, std::unique_ptr<Strategy> strategy,
            const SimConfig& cfg, std::uint64_t seed = 0);
  ~Simulator() override;

  void run();

  // Called for every completed transfer, before the receiver sees it.
  using TransferObserver = std::function<void(Seconds, const Transfer&)>;
  void observe(TransferObserver fn) { observer_ = std::move(fn); }

  const MetricsLedger& ledger() const { return ledger_; }
  MetricsLedger take_ledger() { return std::move(ledger_); }
  const Strategy& strategy() const { return *strategy_; }

  // Seeded direct utility of each content at its holder.
  static std::vector<double> seed_holder_utilities(std::size_t n_contents, std::uint64_t seed);

 private:
  struct Later {
    bool operator()(const Event& x, const Event& y) const;
  };

  Seconds now() const override { return now_; }
  bool in_contact(NodeId a, NodeId b) const override;
  std::span<const NodeId> neighbors(NodeId n) const override { return nbrs_[n]; }
  void send(NodeId from, NodeId to, Packet packet, bool is_retx) override;
  void deliver_to_app(NodeId consumer, std::span<const RequestId> requests,
                      std::uint32_t hop_count) override;

  void push(Seconds t, EventKind k, std::int64_t a);
  void dispatch(const Event& e);
  void settle_sends();
  void arrive(const Transfer& t);
  void validate_inputs() const;
  void init(std::uint64_t seed);

  const ContactTrace& trace_;
  const Workload& workload_;
  SimConfig cfg_;
  std::unique_ptr<Strategy> strategy_;
  std::optional<LinkLayer> links_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t seq_ = 0;
  Seconds now_ = 0;
  std::vector<std::vector<NodeId>> nbrs_;  // sorted
  std::vector<Transfer> immediate_;         // infinite bandwidth FIFO
  std::size_t immediate_head_ = 0;
  MetricsLedger ledger_;
  TransferObserver observer_;
};

// Convenience wrapper: builds, runs and returns the ledger.
MetricsLedger run_simulation(const ContactTrace& trace, const Workload& workload,
                             const StrategyConfig& strategy, const SimConfig& cfg,
                             std::uint64_t seed);

}  // namespace mobccn
