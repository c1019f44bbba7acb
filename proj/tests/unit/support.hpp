#pragma once

#include <utility>
#include <vector>

#include "blockprop/netmodel.hpp"
#include "blockprop/topology.hpp"

namespace blockprop::testing {

/// Every region pair has the same latency and every node the same bandwidth.
inline NetParams uniform_params(double latency_ms, double bps) {
  NetParams p;
  for (auto& row : p.latency_ms) row.fill(latency_ms);
  p.upload_bps.fill(bps);
  p.download_bps.fill(bps);
  p.region_shares.fill(1.0 / kRegionCount);
  return p;
}

/// Network from an explicit edge list; all nodes in North America.
inline Network make_graph(std::size_t n,
                          const std::vector<std::pair<NodeId, NodeId>>& edges,
                          bool cbr = false, NodeKind kind = NodeKind::Control) {
  std::vector<std::vector<NodeId>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<NodeInfo> nodes(n);
  for (auto& info : nodes) {
    info.cbr_capable = cbr;
    info.kind = kind;
    info.hash_share = 1.0 / static_cast<double>(n);
  }
  return Network(std::move(nodes), adj);
}

}  // namespace blockprop::testing
