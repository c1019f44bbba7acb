#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "blockprop/engine.hpp"
#include "blockprop/mining.hpp"

namespace blockprop {

class UnknownBlockError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Append-only record of when each node accepted each block.
class ArrivalLog {
 public:
  struct Arrival {
    NodeId node = 0;
    SimTime accept_time = 0;
  };

  explicit ArrivalLog(std::size_t total_nodes) : total_nodes_(total_nodes) {}

  /// Registers a block; must precede its arrivals. Block ids need not be
  /// contiguous.
  void add_block(BlockId block, SimTime mint_time);
  /// Throws std::invalid_argument on a duplicate (block, node) entry or an
  /// accept time before the mint time.
  void record(BlockId block, NodeId node, SimTime accept_time);

  bool contains(BlockId block) const;
  SimTime mint_time(BlockId block) const;
  const std::vector<Arrival>& arrivals(BlockId block) const;
  std::size_t total_nodes() const { return total_nodes_; }
  /// Registered block ids in ascending order.
  std::vector<BlockId> block_ids() const;

 private:
  struct Entry {
    bool present = false;
    SimTime mint_time = 0;
    std::vector<Arrival> arrivals;
    std::vector<bool> seen;
  };
  const Entry& entry(BlockId block) const;

  std::size_t total_nodes_;
  std::vector<Entry> entries_;
};

/// Nearest-rank percentile of a block's propagation delay over all nodes:
/// the k-th smallest delay with k = ceil(q * total_nodes). Empty when fewer
/// than k nodes accepted the block.
std::optional<SimTime> propagation_percentile(const ArrivalLog& log,
                                              BlockId block, double q);

struct DelayAggregate {
  double mean_ms = 0.0;
  std::size_t blocks_used = 0;
  std::size_t undefined_blocks = 0;
};

/// Mean of per-block percentiles over blocks with a defined value, skipping
/// the first `warmup_blocks` registered blocks. Throws std::domain_error when
/// no block is eligible.
DelayAggregate aggregate_delay(const ArrivalLog& log, double q,
                               std::size_t warmup_blocks = 10);

/// Fraction of generated blocks that are not ancestors of `final_head`.
/// Genesis is excluded from both counts.
double fork_rate(const BlockLedger& ledger, BlockId final_head);

}  // namespace blockprop
