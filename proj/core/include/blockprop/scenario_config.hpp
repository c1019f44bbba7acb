#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "blockprop/engine.hpp"
#include "blockprop/mining.hpp"
#include "blockprop/netmodel.hpp"
#include "blockprop/protocol.hpp"
#include "blockprop/topology.hpp"

namespace blockprop {

struct CbrParams {
  double utilization = 0.964;
  std::uint32_t compact_size_bytes = 18'000;
  double churn_ratio = 0.976;
  double p_fail_churn = 0.27;
  double p_fail_control = 0.13;
};

/// Fully resolved configuration of one simulated experiment cell.
struct ScenarioConfig {
  std::string name = "custom";
  std::string preset;
  std::size_t node_count = 0;
  std::uint64_t block_count = 1000;
  std::uint32_t block_size_bytes = 0;
  SimTime interval_ms = 600'000;

  /// Year of the built-in Internet parameters, unless `netparams_file` is set.
  std::optional<int> internet;
  std::string netparams_file;
  NetParams netparams;

  bool cbr_enabled = false;
  CbrParams cbr;
  DegreeDistribution degree_dist = DegreeDistribution::constant(8);
  HashPowerProfile hashpower;
  std::uint64_t seed = 1;
  std::size_t warmup_blocks = 10;

  std::uint32_t control_message_bytes = 61;
  SimTime validation_ms = 0;
  UploadPolicy upload_policy = UploadPolicy::SerialDelivery;
  bool high_bandwidth = false;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  ProtocolConfig protocol_config() const;
};

}  // namespace blockprop
