#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "blockprop/engine.hpp"
#include "blockprop/mining.hpp"
#include "blockprop/netmodel.hpp"
#include "blockprop/rng.hpp"
#include "blockprop/topology.hpp"

namespace blockprop {

/// Size of the data a CBR receiver must download after a failed
/// reconstruction, as a fraction r of the block size. Survival functions:
///   churn:   P(R > r) = exp(-churn_rate_constant * r)
///   control: P(R > r) = 1 - control_log_coeff * ln(control_scale * r + 1)
struct FailureSizeModel {
  double churn_rate_constant = 2.12e3;
  double control_log_coeff = 0.0964;
  double control_scale = 2.89e4;
  double p_fail_churn = 0.27;
  double p_fail_control = 0.13;

  double survival(NodeKind kind, double r) const;
  /// Inverse of the survival function at u in (0,1], clamped to [0,1].
  double ratio_for(NodeKind kind, double u) const;
  double failure_probability(NodeKind kind) const {
    return kind == NodeKind::Churn ? p_fail_churn : p_fail_control;
  }
};

struct ReconstructionOutcome {
  bool failed = false;
  std::uint32_t missing_bytes = 0;
};

ReconstructionOutcome sample_reconstruction(NodeKind kind,
                                            std::uint32_t block_size,
                                            const FailureSizeModel& model,
                                            Rng& rng);

/// How a node's uplink is shared among concurrent block-carrying transfers.
enum class UploadPolicy : std::uint8_t {
  /// Every transfer gets the full bottleneck bandwidth at once.
  Parallel,
  /// Block-carrying messages (FullBlock, CompactBlock, BlockTxn) leave one at
  /// a time in request order; each holds the uplink for its transmission time.
  Serial,
  /// As Serial, but the uplink stays busy until the message has arrived, so
  /// every queued transfer also waits out the previous one's latency.
  SerialDelivery,
};

std::string_view to_string(UploadPolicy policy);
UploadPolicy parse_upload_policy(std::string_view text);

struct ProtocolConfig {
  bool cbr_enabled = false;
  std::uint32_t compact_size_bytes = 18'000;
  std::uint32_t control_message_bytes = 61;
  /// Delay between holding a complete block and announcing it.
  SimTime validation_ms = 0;
  /// High-bandwidth compact relaying is not modeled; enabling it is an error.
  bool high_bandwidth = false;
  UploadPolicy upload = UploadPolicy::SerialDelivery;
  FailureSizeModel failure;
};

/// Wire size of a message. `block_size` applies to FullBlock and
/// `missing_bytes` to BlockTxn.
std::uint32_t message_size(MessageKind kind, const ProtocolConfig& config,
                           std::uint32_t block_size = 0,
                           std::uint32_t missing_bytes = 0);

struct ProtocolCounters {
  std::array<std::uint64_t, kMessageKindCount> messages{};
  std::array<std::uint64_t, kMessageKindCount> bytes{};
  /// Indexed by NodeKind: compact blocks received and reconstruction failures.
  std::array<std::uint64_t, 2> compact_receptions{};
  std::array<std::uint64_t, 2> reconstruction_failures{};
  std::uint64_t protocol_errors = 0;
};

/// Per-node relay state machine for legacy (inv/getdata/block) and CBR
/// low-bandwidth (inv/getdata/cmpctblock[/getblocktxn/blocktxn]) exchanges.
class RelayProtocol {
 public:
  /// Called whenever a node accepts a block; `head_changed` tells whether the
  /// block became the node's new head.
  using AcceptHook =
      std::function<void(NodeId node, BlockId block, bool head_changed)>;

  RelayProtocol(Engine& engine, const Network& network, const NetParams& params,
                const BlockLedger& ledger, ProtocolConfig config,
                Rng reconstruction_rng, AcceptHook on_accept);

  /// The minter accepts its own block and announces it to every neighbor.
  void on_minted(NodeId minter, BlockId block);

  void handle_message(const Event& event);

  /// Sends Inv for `block` to every neighbor not known to have it already.
  void relay_block(NodeId node, BlockId block);

  bool knows(NodeId node, BlockId block) const {
    return block < known_.size() && known_[block][node];
  }
  BlockId head(NodeId node) const { return heads_[node]; }
  bool in_flight(NodeId node, BlockId block) const {
    return pending_.contains(key(node, block));
  }
  /// True when `a` and `b` exchange blocks with the compact protocol.
  bool uses_compact(NodeId a, NodeId b) const {
    return config_.cbr_enabled && network_.node(a).cbr_capable &&
           network_.node(b).cbr_capable;
  }

  const ProtocolCounters& counters() const { return counters_; }
  const ProtocolConfig& config() const { return config_; }

 private:
  struct Pending {
    NodeId source = kNoNode;
    boost::container::small_vector<NodeId, 8> announcers;
  };

  static std::uint64_t key(NodeId node, BlockId block) {
    return (static_cast<std::uint64_t>(block) << 32) | node;
  }

  void send(NodeId from, NodeId to, MessageKind kind, BlockId block,
            std::uint32_t payload, std::uint32_t aux = 0);
  void ensure_known_row(BlockId block);
  void complete(NodeId node, BlockId block);
  void accept(NodeId node, BlockId block);

  Engine& engine_;
  const Network& network_;
  const NetParams& params_;
  const BlockLedger& ledger_;
  ProtocolConfig config_;
  Rng rng_;
  AcceptHook on_accept_;

  std::vector<std::vector<bool>> known_;
  std::vector<BlockId> heads_;
  std::vector<SimTime> upload_free_at_;
  std::unordered_map<std::uint64_t, Pending> pending_;
  // (parent, node) -> complete children waiting for that parent.
  std::unordered_map<std::uint64_t, std::vector<BlockId>> waiting_;
  ProtocolCounters counters_;
};

}  // namespace blockprop
