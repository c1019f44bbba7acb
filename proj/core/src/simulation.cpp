#include "blockprop/simulation.hpp"

#include <algorithm>

namespace blockprop {

Network make_network(const ScenarioConfig& config) {
  config.validate();
  Network network = build_network(config.node_count,
                                  config.netparams.region_shares,
                                  config.degree_dist, config.seed);
  // Roles are drawn even with CBR disabled so that the legacy and CBR cells of
  // one seed share the same nodes, churn kinds, and hash power.
  Rng roles = make_stream(config.seed, Stream::Roles);
  network = assign_roles(std::move(network), config.cbr.utilization,
                         config.cbr.churn_ratio, roles);
  Rng hash = make_stream(config.seed, Stream::HashPower);
  const auto shares = assign_hashpower(network.size(), config.hashpower, hash);
  for (NodeId id = 0; id < network.size(); ++id) {
    network.node(id).hash_share = shares[id];
  }
  return network;
}

Simulation::Simulation(const ScenarioConfig& config)
    : Simulation(config, make_network(config)) {}

Simulation::Simulation(const ScenarioConfig& config, Network network)
    : config_(config), network_(std::move(network)) {
  config_.validate();
  if (network_.size() != config_.node_count) {
    throw ConfigError("network has " + std::to_string(network_.size()) +
                      " nodes but node_count is " +
                      std::to_string(config_.node_count));
  }
}

RunResult Simulation::run() {
  ledger_ = BlockLedger{};
  log_ = std::make_unique<ArrivalLog>(network_.size());

  Engine engine;
  engine.set_trace_sink(trace_sink_);

  std::vector<double> shares(network_.size());
  for (NodeId id = 0; id < network_.size(); ++id) {
    shares[id] = network_.node(id).hash_share;
  }
  MiningScheduler mining(engine, shares, config_.interval_ms, config_.seed);

  RelayProtocol protocol(
      engine, network_, config_.netparams, ledger_, config_.protocol_config(),
      make_stream(config_.seed, Stream::Reconstruction),
      [&](NodeId node, BlockId block, bool head_changed) {
        log_->record(block, node, engine.now());
        if (head_changed) mining.on_head_change(node, protocol.head(node));
      });

  for (NodeId id = 0; id < network_.size(); ++id) {
    mining.on_head_change(id, kGenesis);
  }

  const auto handler = [&](const Event& event) {
    if (event.kind == EventKind::MessageArrival) {
      protocol.handle_message(event);
      return;
    }
    const NodeId minter = event.src;
    mining.on_dispatched(minter);
    const Block& block = ledger_.add(event.block, config_.block_size_bytes,
                                     minter, engine.now());
    log_->add_block(block.id, block.mint_time);
    protocol.on_minted(minter, block.id);
  };

  engine.run(StopCondition::block_count_reached(config_.block_count), handler);
  mining.stop();
  engine.run(StopCondition::drain(), handler);

  RunResult result;
  result.seed = config_.seed;
  result.blocks = ledger_.size() - 1;
  const auto p50 = aggregate_delay(*log_, 0.5, config_.warmup_blocks);
  const auto p90 = aggregate_delay(*log_, 0.9, config_.warmup_blocks);
  result.delay_p50_ms = p50.mean_ms;
  result.delay_p90_ms = p90.mean_ms;
  result.undefined_p50_blocks = p50.undefined_blocks;
  result.undefined_p90_blocks = p90.undefined_blocks;

  const Block& tip = ledger_.best_tip();
  result.fork_rate = fork_rate(ledger_, tip.id);
  if (result.blocks > 0) {
    SimTime last = 0;
    for (const auto& b : ledger_.blocks()) last = std::max(last, b.mint_time);
    result.mean_interblock_ms =
        static_cast<double>(last) / static_cast<double>(result.blocks);
  }
  result.counters = protocol.counters();
  result.events_dispatched = engine.dispatched();
  result.trace_hash = engine.trace_hash();

  const auto main_chain = ledger_.main_chain_mask(tip.id);
  result.block_stats.reserve(result.blocks);
  for (BlockId id = 1; id < ledger_.size(); ++id) {
    BlockStat stat;
    stat.id = id;
    stat.p50_ms = propagation_percentile(*log_, id, 0.5);
    stat.p90_ms = propagation_percentile(*log_, id, 0.9);
    stat.reached_all = log_->arrivals(id).size() == network_.size();
    stat.on_main_chain = main_chain[id];
    result.block_stats.push_back(stat);
  }
  return result;
}

}  // namespace blockprop
