#include "blockprop/mining.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "blockprop/error.hpp"

namespace blockprop {

BlockLedger::BlockLedger() { blocks_.push_back(Block{}); }

const Block& BlockLedger::add(BlockId parent, std::uint32_t size_bytes,
                              NodeId minter, SimTime mint_time) {
  const Block& p = at(parent);
  Block b;
  b.id = static_cast<BlockId>(blocks_.size());
  b.parent = parent;
  b.height = p.height + 1;
  b.total_difficulty = p.total_difficulty + 1.0;
  b.size_bytes = size_bytes;
  b.minter = minter;
  b.mint_time = mint_time;
  blocks_.push_back(b);
  return blocks_.back();
}

const Block& BlockLedger::best_tip() const {
  const Block* best = &blocks_.front();
  for (const auto& b : blocks_) {
    if (b.total_difficulty > best->total_difficulty) best = &b;
  }
  return *best;
}

std::vector<bool> BlockLedger::main_chain_mask(BlockId tip) const {
  std::vector<bool> mask(blocks_.size(), false);
  BlockId cursor = tip;
  while (true) {
    mask[cursor] = true;
    if (cursor == kGenesis) break;
    cursor = blocks_[cursor].parent;
  }
  return mask;
}

std::vector<double> assign_hashpower(std::size_t n, const HashPowerProfile& profile,
                                     Rng& rng) {
  if (!(profile.mean > 0.0)) throw ConfigError("hashpower mean must be positive");
  if (profile.stddev < 0.0) throw ConfigError("hashpower stddev must be >= 0");
  if (!(profile.floor > 0.0)) throw ConfigError("hashpower floor must be positive");

  std::vector<double> shares(n, profile.mean);
  if (profile.stddev > 0.0) {
    std::normal_distribution<double> gauss(profile.mean, profile.stddev);
    for (auto& s : shares) s = std::max(gauss(rng), profile.floor);
  }
  const double total = std::accumulate(shares.begin(), shares.end(), 0.0);
  for (auto& s : shares) s /= total;
  return shares;
}

SimTime sample_next_block_time(double hash_share, SimTime interval_ms, Rng& rng) {
  const double u = uniform_open01(rng);
  const double mean = static_cast<double>(interval_ms) / hash_share;
  return round_half_up(-std::log(u) * mean);
}

const Block& select_head(const Block& current, const Block& candidate) {
  return candidate.total_difficulty > current.total_difficulty ? candidate
                                                               : current;
}

MiningScheduler::MiningScheduler(Engine& engine, std::span<const double> shares,
                                 SimTime interval_ms, std::uint64_t seed)
    : engine_(engine),
      shares_(shares.begin(), shares.end()),
      interval_ms_(interval_ms),
      pending_(shares.size()) {
  if (interval_ms <= 0) throw ConfigError("interval_ms must be positive");
  streams_.reserve(shares_.size());
  for (std::size_t node = 0; node < shares_.size(); ++node) {
    streams_.push_back(make_stream(seed, Stream::Mining, node));
  }
}

void MiningScheduler::on_head_change(NodeId node, BlockId head) {
  if (stopped_) return;
  if (pending_[node]) engine_.cancel(*pending_[node]);
  const SimTime wait =
      sample_next_block_time(shares_[node], interval_ms_, streams_[node]);
  pending_[node] = engine_.schedule(Event::mining(engine_.now() + wait, node, head));
}

void MiningScheduler::stop() {
  for (auto& handle : pending_) {
    if (handle) engine_.cancel(*handle);
    handle.reset();
  }
  stopped_ = true;
}

}  // namespace blockprop
