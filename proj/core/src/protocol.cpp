#include "blockprop/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blockprop/error.hpp"

namespace blockprop {

double FailureSizeModel::survival(NodeKind kind, double r) const {
  if (r < 0.0) return 1.0;
  if (kind == NodeKind::Churn) return std::exp(-churn_rate_constant * r);
  return std::max(0.0, 1.0 - control_log_coeff * std::log1p(control_scale * r));
}

double FailureSizeModel::ratio_for(NodeKind kind, double u) const {
  double r = 0.0;
  if (kind == NodeKind::Churn) {
    r = -std::log(u) / churn_rate_constant;
  } else {
    r = std::expm1((1.0 - u) / control_log_coeff) / control_scale;
  }
  return std::clamp(r, 0.0, 1.0);
}

ReconstructionOutcome sample_reconstruction(NodeKind kind,
                                            std::uint32_t block_size,
                                            const FailureSizeModel& model,
                                            Rng& rng) {
  ReconstructionOutcome out;
  out.failed = uniform_open01(rng) < model.failure_probability(kind);
  if (!out.failed) return out;
  const double r = model.ratio_for(kind, uniform_open01(rng));
  out.missing_bytes = static_cast<std::uint32_t>(
      round_half_up(r * static_cast<double>(block_size)));
  return out;
}

std::string_view to_string(UploadPolicy policy) {
  switch (policy) {
    case UploadPolicy::Parallel: return "parallel";
    case UploadPolicy::Serial: return "serial";
    case UploadPolicy::SerialDelivery: return "serial_delivery";
  }
  return "?";
}

UploadPolicy parse_upload_policy(std::string_view text) {
  if (text == "parallel") return UploadPolicy::Parallel;
  if (text == "serial") return UploadPolicy::Serial;
  if (text == "serial_delivery") return UploadPolicy::SerialDelivery;
  throw ConfigError(
      "upload_policy must be 'parallel', 'serial' or 'serial_delivery', got '" +
      std::string(text) + "'");
}

std::uint32_t message_size(MessageKind kind, const ProtocolConfig& config,
                           std::uint32_t block_size,
                           std::uint32_t missing_bytes) {
  switch (kind) {
    case MessageKind::FullBlock: return block_size;
    case MessageKind::CompactBlock: return config.compact_size_bytes;
    case MessageKind::BlockTxn: return missing_bytes;
    case MessageKind::Inv:
    case MessageKind::GetData:
    case MessageKind::GetDataCompact:
    case MessageKind::GetBlockTxn: return config.control_message_bytes;
  }
  return 0;
}

RelayProtocol::RelayProtocol(Engine& engine, const Network& network,
                             const NetParams& params, const BlockLedger& ledger,
                             ProtocolConfig config, Rng reconstruction_rng,
                             AcceptHook on_accept)
    : engine_(engine),
      network_(network),
      params_(params),
      ledger_(ledger),
      config_(config),
      rng_(std::move(reconstruction_rng)),
      on_accept_(std::move(on_accept)),
      heads_(network.size(), kGenesis),
      upload_free_at_(network.size(), 0) {
  if (config_.high_bandwidth) {
    throw ConfigError("high-bandwidth compact block relaying is not supported");
  }
  if (config_.validation_ms < 0) throw ConfigError("validation_ms must be >= 0");
  ensure_known_row(kGenesis);
  known_[kGenesis].assign(network.size(), true);
}

void RelayProtocol::ensure_known_row(BlockId block) {
  while (known_.size() <= block) {
    known_.emplace_back(network_.size(), false);
  }
}

void RelayProtocol::send(NodeId from, NodeId to, MessageKind kind,
                         BlockId block, std::uint32_t payload,
                         std::uint32_t aux) {
  const Region rf = network_.node(from).region;
  const Region rt = network_.node(to).region;
  const auto k = static_cast<std::size_t>(kind);
  ++counters_.messages[k];
  counters_.bytes[k] += payload;

  const bool carries_block = kind == MessageKind::FullBlock ||
                             kind == MessageKind::CompactBlock ||
                             kind == MessageKind::BlockTxn;
  SimTime arrival = 0;
  if (carries_block && config_.upload != UploadPolicy::Parallel) {
    const SimTime start = std::max(engine_.now(), upload_free_at_[from]);
    const SimTime done = start + transmission_ms(payload, rf, rt, params_);
    arrival = done + latency_ms(rf, rt, params_);
    upload_free_at_[from] =
        config_.upload == UploadPolicy::Serial ? done : arrival;
  } else {
    arrival = engine_.now() + transfer_delay(payload, rf, rt, params_);
  }
  engine_.schedule(Event::arrival(arrival, from, to, kind, block, payload, aux));
}

void RelayProtocol::on_minted(NodeId minter, BlockId block) {
  ensure_known_row(block);
  accept(minter, block);
}

void RelayProtocol::relay_block(NodeId node, BlockId block) {
  const Pending* pending = nullptr;
  if (auto it = pending_.find(key(node, block)); it != pending_.end()) {
    pending = &it->second;
  }
  // Announcing after validation: the Inv leaves validation_ms after now.
  for (NodeId peer : network_.neighbors(node)) {
    if (pending != nullptr &&
        (peer == pending->source ||
         std::find(pending->announcers.begin(), pending->announcers.end(),
                   peer) != pending->announcers.end())) {
      continue;
    }
    const Region rf = network_.node(node).region;
    const Region rt = network_.node(peer).region;
    const auto size = config_.control_message_bytes;
    ++counters_.messages[static_cast<std::size_t>(MessageKind::Inv)];
    counters_.bytes[static_cast<std::size_t>(MessageKind::Inv)] += size;
    engine_.schedule(Event::arrival(
        engine_.now() + config_.validation_ms + transfer_delay(size, rf, rt, params_),
        node, peer, MessageKind::Inv, block, size));
  }
}

void RelayProtocol::accept(NodeId node, BlockId block) {
  known_[block][node] = true;
  const Block& current = ledger_.at(heads_[node]);
  const Block& chosen = select_head(current, ledger_.at(block));
  const bool head_changed = chosen.id != current.id;
  if (head_changed) heads_[node] = chosen.id;

  relay_block(node, block);
  pending_.erase(key(node, block));
  if (on_accept_) on_accept_(node, block, head_changed);

  // Children that arrived before this block can now be accepted too.
  if (auto it = waiting_.find(key(node, block)); it != waiting_.end()) {
    auto children = std::move(it->second);
    waiting_.erase(it);
    for (BlockId child : children) accept(node, child);
  }
}

void RelayProtocol::complete(NodeId node, BlockId block) {
  if (known_[block][node]) return;
  const BlockId parent = ledger_.at(block).parent;
  if (!known_[parent][node]) {
    waiting_[key(node, parent)].push_back(block);
    return;
  }
  accept(node, block);
}

void RelayProtocol::handle_message(const Event& event) {
  const NodeId self = event.dst;
  const NodeId peer = event.src;
  const BlockId block = event.block;
  if (!ledger_.contains(block)) {
    ++counters_.protocol_errors;
    return;
  }
  ensure_known_row(block);
  const Block& b = ledger_.at(block);

  switch (event.message) {
    case MessageKind::Inv: {
      if (known_[block][self]) return;
      auto [it, inserted] = pending_.try_emplace(key(self, block));
      it->second.announcers.push_back(peer);
      if (!inserted) return;
      it->second.source = peer;
      const auto request = uses_compact(self, peer) ? MessageKind::GetDataCompact
                                                    : MessageKind::GetData;
      send(self, peer, request, block, message_size(request, config_));
      return;
    }
    case MessageKind::GetData:
      if (!known_[block][self]) {
        ++counters_.protocol_errors;
        return;
      }
      send(self, peer, MessageKind::FullBlock, block,
           message_size(MessageKind::FullBlock, config_, b.size_bytes));
      return;
    case MessageKind::GetDataCompact:
      if (!known_[block][self]) {
        ++counters_.protocol_errors;
        return;
      }
      send(self, peer, MessageKind::CompactBlock, block,
           message_size(MessageKind::CompactBlock, config_));
      return;
    case MessageKind::CompactBlock: {
      const NodeKind kind = network_.node(self).kind;
      const auto k = static_cast<std::size_t>(kind);
      ++counters_.compact_receptions[k];
      const auto outcome =
          sample_reconstruction(kind, b.size_bytes, config_.failure, rng_);
      if (!outcome.failed) {
        complete(self, block);
        return;
      }
      ++counters_.reconstruction_failures[k];
      send(self, peer, MessageKind::GetBlockTxn, block,
           message_size(MessageKind::GetBlockTxn, config_), outcome.missing_bytes);
      return;
    }
    case MessageKind::GetBlockTxn:
      if (!known_[block][self]) {
        ++counters_.protocol_errors;
        return;
      }
      send(self, peer, MessageKind::BlockTxn, block,
           message_size(MessageKind::BlockTxn, config_, b.size_bytes, event.aux));
      return;
    case MessageKind::FullBlock:
    case MessageKind::BlockTxn:
      complete(self, block);
      return;
  }
}

}  // namespace blockprop
