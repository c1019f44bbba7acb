#include "blockprop/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <queue>
#include <string>

#include "blockprop/csv.hpp"

namespace blockprop {

std::string_view to_string(NodeKind kind) {
  return kind == NodeKind::Churn ? "churn" : "control";
}

DegreeDistribution::DegreeDistribution(std::vector<Entry> table)
    : table_(std::move(table)) {
  if (table_.empty()) throw ConfigError("degree distribution is empty");
  double total = 0.0;
  for (const auto& e : table_) {
    if (e.degree == 0) throw ConfigError("degree distribution: degree 0");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw ConfigError("degree distribution: negative or non-finite weight");
    }
    total += e.weight;
  }
  if (total <= 0.0) throw ConfigError("degree distribution: zero total weight");
  double running = 0.0;
  for (auto& e : table_) {
    e.weight /= total;
    running += e.weight;
    cumulative_.push_back(running);
  }
  cumulative_.back() = 1.0;
}

DegreeDistribution DegreeDistribution::constant(std::uint32_t degree) {
  return DegreeDistribution({{degree, 1.0}});
}

std::uint32_t DegreeDistribution::sample(Rng& rng) const {
  if (table_.size() == 1) return table_.front().degree;
  const double u = uniform_open01(rng);
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  return table_[static_cast<std::size_t>(it - cumulative_.begin())].degree;
}

std::uint32_t DegreeDistribution::max_degree() const {
  std::uint32_t best = 0;
  for (const auto& e : table_) {
    if (e.weight > 0.0) best = std::max(best, e.degree);
  }
  return best;
}

double DegreeDistribution::mean() const {
  double m = 0.0;
  for (const auto& e : table_) m += e.degree * e.weight;
  return m;
}

Network::Network(std::vector<NodeInfo> nodes,
                 const std::vector<std::vector<NodeId>>& adjacency)
    : nodes_(std::move(nodes)) {
  if (adjacency.size() != nodes_.size()) {
    throw DataError("adjacency size does not match node count");
  }
  offsets_.reserve(nodes_.size() + 1);
  // Sorted lists make a reloaded edge dump relay in the same order.
  for (const auto& list : adjacency) {
    const auto first = neighbors_.size();
    neighbors_.insert(neighbors_.end(), list.begin(), list.end());
    std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(first),
              neighbors_.end());
    offsets_.push_back(neighbors_.size());
  }
}

bool Network::is_connected() const {
  if (nodes_.empty()) return true;
  std::vector<bool> seen(nodes_.size(), false);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const NodeId current = frontier.front();
    frontier.pop();
    for (NodeId next : neighbors(current)) {
      if (!seen[next]) {
        seen[next] = true;
        ++reached;
        frontier.push(next);
      }
    }
  }
  return reached == nodes_.size();
}

PerRegion<std::size_t> Network::region_counts() const {
  PerRegion<std::size_t> counts{};
  for (const auto& n : nodes_) ++counts[index_of(n.region)];
  return counts;
}

PerRegion<std::size_t> apportion(std::size_t total,
                                 const PerRegion<double>& shares) {
  const double sum = std::accumulate(shares.begin(), shares.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("region shares sum to " + std::to_string(sum) +
                      ", expected 1");
  }
  PerRegion<std::size_t> counts{};
  PerRegion<double> remainder{};
  std::size_t assigned = 0;
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    if (shares[r] < 0.0) throw ConfigError("negative region share");
    const double exact = shares[r] * static_cast<double>(total);
    counts[r] = static_cast<std::size_t>(std::floor(exact));
    remainder[r] = exact - std::floor(exact);
    assigned += counts[r];
  }
  std::array<std::size_t, kRegionCount> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t i = 0; assigned < total; i = (i + 1) % kRegionCount) {
    ++counts[order[i]];
    ++assigned;
  }
  return counts;
}

namespace {

bool contains(const std::vector<NodeId>& list, NodeId id) {
  return std::find(list.begin(), list.end(), id) != list.end();
}

void link(std::vector<std::vector<NodeId>>& adjacency, NodeId a, NodeId b) {
  adjacency[a].push_back(b);
  adjacency[b].push_back(a);
}

// Connects `self` to up to `want` distinct peers that are not yet neighbors.
void connect_outbound(std::vector<std::vector<NodeId>>& adjacency, NodeId self,
                      std::uint32_t want, Rng& rng) {
  const std::size_t n = adjacency.size();
  const std::size_t available = n - 1 - adjacency[self].size();
  const std::size_t target = std::min<std::size_t>(want, available);
  if (target == 0) return;

  if (target * 4 > available) {
    std::vector<NodeId> candidates;
    candidates.reserve(available);
    for (NodeId id = 0; id < n; ++id) {
      if (id != self && !contains(adjacency[self], id)) candidates.push_back(id);
    }
    for (std::size_t i = 0; i < target; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
      std::swap(candidates[i], candidates[pick(rng)]);
      link(adjacency, self, candidates[i]);
    }
    return;
  }

  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  std::size_t made = 0;
  while (made < target) {
    const NodeId peer = pick(rng);
    if (peer == self || contains(adjacency[self], peer)) continue;
    link(adjacency, self, peer);
    ++made;
  }
}

}  // namespace

Network build_network(std::size_t node_count, const PerRegion<double>& shares,
                      const DegreeDistribution& degrees, std::uint64_t seed) {
  if (node_count == 0) throw ConfigError("node_count must be positive");
  if (node_count < static_cast<std::size_t>(degrees.max_degree()) + 1) {
    throw ConfigError("node_count " + std::to_string(node_count) +
                      " is smaller than max degree + 1 (" +
                      std::to_string(degrees.max_degree() + 1) + ")");
  }
  const auto counts = apportion(node_count, shares);

  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng = make_stream(seed, Stream::Topology, attempt);

    std::vector<NodeInfo> nodes;
    nodes.reserve(node_count);
    for (std::size_t r = 0; r < kRegionCount; ++r) {
      for (std::size_t i = 0; i < counts[r]; ++i) {
        nodes.push_back(NodeInfo{kAllRegions[r]});
      }
    }
    std::shuffle(nodes.begin(), nodes.end(), rng);

    std::vector<std::vector<NodeId>> adjacency(node_count);
    for (NodeId self = 0; self < node_count; ++self) {
      connect_outbound(adjacency, self, degrees.sample(rng), rng);
    }
    Network network(std::move(nodes), adjacency);
    if (network.is_connected()) return network;
  }
  throw ConfigError("could not build a connected network in " +
                    std::to_string(kMaxAttempts) + " attempts");
}

Network assign_roles(Network network, double cbr_rate, double churn_ratio,
                     Rng& rng) {
  if (!(cbr_rate >= 0.0 && cbr_rate <= 1.0)) {
    throw ConfigError("cbr utilization must be in [0,1]");
  }
  if (!(churn_ratio >= 0.0 && churn_ratio <= 1.0)) {
    throw ConfigError("churn ratio must be in [0,1]");
  }
  const std::size_t n = network.size();
  std::vector<NodeId> order(n);

  const auto cbr_count = static_cast<std::size_t>(std::llround(cbr_rate * n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < n; ++i) {
    network.node(order[i]).cbr_capable = i < cbr_count;
  }

  const auto churn_count =
      static_cast<std::size_t>(std::llround(churn_ratio * n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < n; ++i) {
    network.node(order[i]).kind =
        i < churn_count ? NodeKind::Churn : NodeKind::Control;
  }
  return network;
}

void write_network_csv(const Network& network,
                       const std::filesystem::path& edges_csv,
                       const std::filesystem::path& nodes_csv) {
  std::ofstream edges(edges_csv);
  if (!edges) throw DataError("cannot write " + edges_csv.string());
  edges << "a,b\n";
  for (NodeId a = 0; a < network.size(); ++a) {
    for (NodeId b : network.neighbors(a)) {
      if (a < b) edges << a << ',' << b << '\n';
    }
  }

  std::ofstream nodes(nodes_csv);
  if (!nodes) throw DataError("cannot write " + nodes_csv.string());
  nodes << "node_id,region,cbr,kind,hash_share\n" << std::setprecision(17);
  for (NodeId id = 0; id < network.size(); ++id) {
    const auto& info = network.node(id);
    nodes << id << ',' << to_string(info.region) << ','
          << (info.cbr_capable ? 1 : 0) << ',' << to_string(info.kind) << ','
          << info.hash_share << '\n';
  }
}

Network read_network_csv(const std::filesystem::path& edges_csv,
                         const std::filesystem::path& nodes_csv) {
  const auto nodes_table = csv::Table::read(nodes_csv);
  std::vector<NodeInfo> nodes(nodes_table.rows());
  for (std::size_t row = 0; row < nodes_table.rows(); ++row) {
    const auto id = static_cast<std::size_t>(nodes_table.number(row, "node_id"));
    if (id != row) {
      throw DataError(nodes_csv.string() + ": node ids must be 0..n-1 in order");
    }
    NodeInfo& info = nodes[id];
    info.region = parse_region(nodes_table.at(row, "region"));
    info.cbr_capable = nodes_table.number(row, "cbr") != 0.0;
    const auto& kind = nodes_table.at(row, "kind");
    if (kind != "churn" && kind != "control") {
      throw DataError(nodes_csv.string() + ": bad kind '" + kind + "'");
    }
    info.kind = kind == "churn" ? NodeKind::Churn : NodeKind::Control;
    info.hash_share = nodes_table.number(row, "hash_share");
  }

  const auto edges_table = csv::Table::read(edges_csv);
  std::vector<std::vector<NodeId>> adjacency(nodes.size());
  for (std::size_t row = 0; row < edges_table.rows(); ++row) {
    const auto a = static_cast<NodeId>(edges_table.number(row, "a"));
    const auto b = static_cast<NodeId>(edges_table.number(row, "b"));
    if (a >= nodes.size() || b >= nodes.size() || a == b) {
      throw DataError(edges_csv.string() + ":" +
                      std::to_string(edges_table.line_of(row)) + ": bad edge");
    }
    link(adjacency, a, b);
  }
  return Network(std::move(nodes), adjacency);
}

}  // namespace blockprop
