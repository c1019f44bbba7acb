#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "blockprop/engine.hpp"
#include "blockprop/error.hpp"
#include "blockprop/region.hpp"
#include "blockprop/rng.hpp"

namespace blockprop {

/// Churn nodes reconnect repeatedly and keep a sparser mempool; control nodes
/// stay connected.
enum class NodeKind : std::uint8_t { Churn, Control };

std::string_view to_string(NodeKind kind);

/// Discrete distribution over the number of outbound connections a node opens.
class DegreeDistribution {
 public:
  struct Entry {
    std::uint32_t degree = 0;
    double weight = 0.0;
  };

  DegreeDistribution() : DegreeDistribution(constant(8)) {}
  explicit DegreeDistribution(std::vector<Entry> table);

  static DegreeDistribution constant(std::uint32_t degree);

  std::uint32_t sample(Rng& rng) const;
  std::uint32_t max_degree() const;
  double mean() const;
  const std::vector<Entry>& table() const { return table_; }
  bool is_constant() const { return table_.size() == 1; }

 private:
  std::vector<Entry> table_;
  std::vector<double> cumulative_;
};

struct NodeInfo {
  Region region = Region::NorthAmerica;
  bool cbr_capable = false;
  NodeKind kind = NodeKind::Control;
  double hash_share = 0.0;
};

/// Undirected overlay. Adjacency is stored compressed; a Network does not
/// change once a run starts.
class Network {
 public:
  Network() = default;
  Network(std::vector<NodeInfo> nodes,
          const std::vector<std::vector<NodeId>>& adjacency);

  std::size_t size() const { return nodes_.size(); }
  std::size_t edge_count() const { return neighbors_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId node) const {
    return {neighbors_.data() + offsets_[node],
            neighbors_.data() + offsets_[node + 1]};
  }
  std::size_t degree(NodeId node) const {
    return offsets_[node + 1] - offsets_[node];
  }

  const NodeInfo& node(NodeId id) const { return nodes_[id]; }
  NodeInfo& node(NodeId id) { return nodes_[id]; }
  const std::vector<NodeInfo>& nodes() const { return nodes_; }

  bool is_connected() const;
  PerRegion<std::size_t> region_counts() const;

 private:
  std::vector<NodeInfo> nodes_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
};

/// Per-region node counts by largest-remainder rounding; sums to `total`.
/// Ties in the fractional part go to the lower region index.
PerRegion<std::size_t> apportion(std::size_t total,
                                 const PerRegion<double>& shares);

/// Builds a connected random overlay. Attempt k draws from the topology
/// stream with index k; a disconnected result is discarded and rebuilt.
Network build_network(std::size_t node_count, const PerRegion<double>& shares,
                      const DegreeDistribution& degrees, std::uint64_t seed);

/// Marks exactly round(cbr_rate*n) nodes CBR-capable and, independently,
/// exactly round(churn_ratio*n) nodes as churn nodes.
Network assign_roles(Network network, double cbr_rate, double churn_ratio,
                     Rng& rng);

/// Edge list `a,b` (a < b) and node attributes
/// `node_id,region,cbr,kind,hash_share`.
void write_network_csv(const Network& network,
                       const std::filesystem::path& edges_csv,
                       const std::filesystem::path& nodes_csv);
Network read_network_csv(const std::filesystem::path& edges_csv,
                         const std::filesystem::path& nodes_csv);

}  // namespace blockprop
