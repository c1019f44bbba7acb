#include "blockprop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace blockprop {

void ArrivalLog::add_block(BlockId block, SimTime mint_time) {
  if (entries_.size() <= block) entries_.resize(block + 1);
  Entry& e = entries_[block];
  if (e.present) {
    throw std::invalid_argument("block " + std::to_string(block) +
                                " registered twice");
  }
  e.present = true;
  e.mint_time = mint_time;
  e.seen.assign(total_nodes_, false);
}

void ArrivalLog::record(BlockId block, NodeId node, SimTime accept_time) {
  if (block >= entries_.size() || !entries_[block].present) {
    throw UnknownBlockError("arrival for unregistered block " +
                            std::to_string(block));
  }
  Entry& e = entries_[block];
  if (node >= total_nodes_) throw std::invalid_argument("node id out of range");
  if (e.seen[node]) {
    throw std::invalid_argument("duplicate arrival of block " +
                                std::to_string(block) + " at node " +
                                std::to_string(node));
  }
  if (accept_time < e.mint_time) {
    throw std::invalid_argument("arrival precedes mint time");
  }
  e.seen[node] = true;
  e.arrivals.push_back({node, accept_time});
}

const ArrivalLog::Entry& ArrivalLog::entry(BlockId block) const {
  if (block >= entries_.size() || !entries_[block].present) {
    throw UnknownBlockError("unknown block " + std::to_string(block));
  }
  return entries_[block];
}

bool ArrivalLog::contains(BlockId block) const {
  return block < entries_.size() && entries_[block].present;
}

SimTime ArrivalLog::mint_time(BlockId block) const {
  return entry(block).mint_time;
}

const std::vector<ArrivalLog::Arrival>& ArrivalLog::arrivals(BlockId block) const {
  return entry(block).arrivals;
}

std::vector<BlockId> ArrivalLog::block_ids() const {
  std::vector<BlockId> ids;
  for (BlockId b = 0; b < entries_.size(); ++b) {
    if (entries_[b].present) ids.push_back(b);
  }
  return ids;
}

std::optional<SimTime> propagation_percentile(const ArrivalLog& log,
                                              BlockId block, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("q must be in (0,1]");
  const auto& arrivals = log.arrivals(block);
  const SimTime minted = log.mint_time(block);
  const auto k = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(log.total_nodes()) - 1e-9));
  if (k == 0 || arrivals.size() < k) return std::nullopt;

  std::vector<SimTime> delays;
  delays.reserve(arrivals.size());
  for (const auto& a : arrivals) delays.push_back(a.accept_time - minted);
  std::nth_element(delays.begin(), delays.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   delays.end());
  return delays[k - 1];
}

DelayAggregate aggregate_delay(const ArrivalLog& log, double q,
                               std::size_t warmup_blocks) {
  DelayAggregate out;
  double sum = 0.0;
  const auto ids = log.block_ids();
  for (std::size_t i = warmup_blocks; i < ids.size(); ++i) {
    const auto p = propagation_percentile(log, ids[i], q);
    if (!p) {
      ++out.undefined_blocks;
      continue;
    }
    sum += static_cast<double>(*p);
    ++out.blocks_used;
  }
  if (out.blocks_used == 0) {
    throw std::domain_error("no block with a defined percentile");
  }
  out.mean_ms = sum / static_cast<double>(out.blocks_used);
  return out;
}

double fork_rate(const BlockLedger& ledger, BlockId final_head) {
  if (!ledger.contains(final_head)) {
    throw UnknownBlockError("final head " + std::to_string(final_head) +
                            " not in ledger");
  }
  const std::size_t generated = ledger.size() - 1;
  if (generated == 0) return 0.0;
  const std::size_t main_chain = ledger.at(final_head).height;
  return static_cast<double>(generated - main_chain) /
         static_cast<double>(generated);
}

}  // namespace blockprop
