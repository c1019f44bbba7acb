#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blockprop/engine.hpp"
#include "blockprop/rng.hpp"

namespace blockprop {

inline constexpr BlockId kGenesis = 0;

struct Block {
  BlockId id = kGenesis;
  BlockId parent = kGenesis;
  std::uint32_t height = 0;
  double total_difficulty = 0.0;
  std::uint32_t size_bytes = 0;
  NodeId minter = kNoNode;
  SimTime mint_time = 0;
};

/// Every block ever minted in a run, indexed by id. Id 0 is the genesis block.
/// Difficulty is constant, so each block adds 1 to its parent's total.
class BlockLedger {
 public:
  BlockLedger();

  const Block& add(BlockId parent, std::uint32_t size_bytes, NodeId minter,
                   SimTime mint_time);

  const Block& at(BlockId id) const { return blocks_.at(id); }
  bool contains(BlockId id) const { return id < blocks_.size(); }
  /// Number of blocks including genesis.
  std::size_t size() const { return blocks_.size(); }
  const std::vector<Block>& blocks() const { return blocks_; }

  /// Highest total difficulty; ties go to the earliest minted block.
  const Block& best_tip() const;

  /// Ids of `tip` and all of its ancestors, genesis included.
  std::vector<bool> main_chain_mask(BlockId tip) const;

 private:
  std::vector<Block> blocks_;
};

struct HashPowerProfile {
  double mean = 1.0;
  double stddev = 0.25;
  double floor = 1e-6;
};

/// Gaussian hash power per node, truncated below at `profile.floor` and
/// normalized to shares summing to 1.
std::vector<double> assign_hashpower(std::size_t n, const HashPowerProfile& profile,
                                     Rng& rng);

/// Exponential waiting time with mean interval_ms / hash_share.
SimTime sample_next_block_time(double hash_share, SimTime interval_ms, Rng& rng);

/// Larger total difficulty wins; an exact tie keeps `current`.
const Block& select_head(const Block& current, const Block& candidate);

/// Owns each node's pending MiningComplete event. Each node draws from its
/// own stream, so a node's k-th waiting time does not depend on the others.
class MiningScheduler {
 public:
  MiningScheduler(Engine& engine, std::span<const double> shares,
                  SimTime interval_ms, std::uint64_t seed);

  /// Cancels the node's pending mining event and starts a fresh,
  /// memoryless attempt on `head`.
  void on_head_change(NodeId node, BlockId head);

  /// Must be called when a node's MiningComplete event is dispatched.
  void on_dispatched(NodeId node) { pending_[node].reset(); }

  /// Cancels every pending attempt and ignores later head changes.
  void stop();

  bool has_pending(NodeId node) const { return pending_[node].has_value(); }
  bool stopped() const { return stopped_; }

 private:
  Engine& engine_;
  std::vector<double> shares_;
  SimTime interval_ms_;
  std::vector<Rng> streams_;
  std::vector<std::optional<EventHandle>> pending_;
  bool stopped_ = false;
};

}  // namespace blockprop
