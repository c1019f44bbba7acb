#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "blockprop/engine.hpp"
#include "blockprop/metrics.hpp"
#include "blockprop/mining.hpp"
#include "blockprop/protocol.hpp"
#include "blockprop/scenario_config.hpp"
#include "blockprop/topology.hpp"

namespace blockprop {

struct BlockStat {
  BlockId id = 0;
  std::optional<SimTime> p50_ms;
  std::optional<SimTime> p90_ms;
  bool reached_all = false;
  bool on_main_chain = false;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::uint64_t blocks = 0;
  double delay_p50_ms = 0.0;
  double delay_p90_ms = 0.0;
  double fork_rate = 0.0;
  std::size_t undefined_p50_blocks = 0;
  std::size_t undefined_p90_blocks = 0;
  double mean_interblock_ms = 0.0;
  ProtocolCounters counters;
  std::uint64_t events_dispatched = 0;
  std::uint64_t trace_hash = 0;
  std::vector<BlockStat> block_stats;
};

/// Builds the network from the seed, mines `block_count` blocks, lets the
/// last ones finish propagating, and computes the run's metrics.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& config);
  /// Uses a prebuilt network instead of generating one from the seed.
  Simulation(const ScenarioConfig& config, Network network);

  void set_trace_sink(std::ostream* sink) { trace_sink_ = sink; }

  RunResult run();

  const Network& network() const { return network_; }
  const BlockLedger& ledger() const { return ledger_; }
  const ArrivalLog& arrivals() const { return *log_; }

 private:
  ScenarioConfig config_;
  Network network_;
  BlockLedger ledger_;
  std::unique_ptr<ArrivalLog> log_;
  std::ostream* trace_sink_ = nullptr;
};

/// Generates the network for `config` exactly as Simulation does.
Network make_network(const ScenarioConfig& config);

}  // namespace blockprop
