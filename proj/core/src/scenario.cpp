#include "blockprop/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

namespace blockprop {

namespace {

void require_fraction(double value, const char* key) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ConfigError(std::string(key) + ": must be in [0,1], got " +
                      std::to_string(value));
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  if (node_count == 0) throw ConfigError("node_count: must be positive");
  if (block_count == 0) throw ConfigError("block_count: must be positive");
  if (block_size_bytes == 0) throw ConfigError("block_size_bytes: must be positive");
  if (interval_ms <= 0) throw ConfigError("interval_ms: must be positive");
  require_fraction(cbr.utilization, "cbr.utilization");
  require_fraction(cbr.churn_ratio, "cbr.churn_ratio");
  require_fraction(cbr.p_fail_churn, "cbr.p_fail_churn");
  require_fraction(cbr.p_fail_control, "cbr.p_fail_control");
  if (cbr.compact_size_bytes == 0) {
    throw ConfigError("cbr.compact_size_bytes: must be positive");
  }
  if (control_message_bytes == 0) {
    throw ConfigError("control_message_bytes: must be positive");
  }
  if (validation_ms < 0) throw ConfigError("validation_ms: must be >= 0");
  if (high_bandwidth) {
    throw ConfigError("high_bandwidth: high-bandwidth relaying is not supported");
  }
  if (!(hashpower.mean > 0.0)) throw ConfigError("hashpower.mean: must be positive");
  if (hashpower.stddev < 0.0) throw ConfigError("hashpower.stddev: must be >= 0");
  if (!(hashpower.floor > 0.0)) throw ConfigError("hashpower.floor: must be positive");
  if (node_count < static_cast<std::size_t>(degree_dist.max_degree()) + 1) {
    throw ConfigError("node_count: smaller than max degree + 1");
  }
  try {
    netparams.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("netparams: ") + e.what());
  }
}

ProtocolConfig ScenarioConfig::protocol_config() const {
  ProtocolConfig p;
  p.cbr_enabled = cbr_enabled;
  p.compact_size_bytes = cbr.compact_size_bytes;
  p.control_message_bytes = control_message_bytes;
  p.validation_ms = validation_ms;
  p.high_bandwidth = high_bandwidth;
  p.upload = upload_policy;
  p.failure.p_fail_churn = cbr.p_fail_churn;
  p.failure.p_fail_control = cbr.p_fail_control;
  return p;
}

std::vector<std::string> preset_names() {
  return {"2015_legacy",     "2015_cbr",     "2019_legacy",     "2019_cbr",
          "cmp_2015_legacy", "cmp_2015_cbr", "cmp_2019_legacy", "cmp_2019_cbr"};
}

ScenarioConfig preset(const std::string& name) {
  const bool comparison = name.starts_with("cmp_");
  const std::string cell = comparison ? name.substr(4) : name;
  int year = 0;
  if (cell.starts_with("2015_")) {
    year = 2015;
  } else if (cell.starts_with("2019_")) {
    year = 2019;
  }
  const std::string protocol = year != 0 ? cell.substr(5) : std::string{};
  if (year == 0 || (protocol != "legacy" && protocol != "cbr")) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("preset: unknown preset '" + name + "' (known: " + known + ")");
  }

  ScenarioConfig c;
  c.name = name;
  c.preset = name;
  c.internet = year;
  c.netparams = internet_preset(year);
  c.cbr_enabled = protocol == "cbr";
  if (comparison || year == 2019) {
    c.node_count = 9000;
    c.block_size_bytes = 1'000'000;
  } else {
    c.node_count = 6000;
    c.block_size_bytes = 535'000;
  }
  return c;
}

namespace {

std::string join_path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path + ": invalid value '" +
                      (node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")) +
                      "'");
  }
}

bool yes_no(const YAML::Node& node, const std::string& path) {
  if (node.IsScalar()) {
    const auto& s = node.Scalar();
    if (s == "on") return true;
    if (s == "off") return false;
  }
  return scalar<bool>(node, path);
}

template <typename Handler>
void for_each_key(const YAML::Node& map, const std::string& path,
                  const std::set<std::string>& allowed, Handler&& handler) {
  if (!map.IsMap()) throw ConfigError((path.empty() ? "<root>" : path) + ": expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    const auto full = join_path(path, key);
    if (!allowed.contains(key)) throw ConfigError(full + ": unknown key");
    handler(key, kv.second, full);
  }
}

PerRegion<double> per_region_yaml(const YAML::Node& node, const std::string& path) {
  PerRegion<double> out{};
  std::array<bool, kRegionCount> seen{};
  if (!node.IsMap()) throw ConfigError(path + ": expected a region mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    Region r;
    try {
      r = parse_region(key);
    } catch (const std::invalid_argument&) {
      throw ConfigError(join_path(path, key) + ": unknown region");
    }
    out[index_of(r)] = scalar<double>(kv.second, join_path(path, key));
    seen[index_of(r)] = true;
  }
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    if (!seen[r]) {
      throw ConfigError(path + ": missing region " + std::string(to_string(kAllRegions[r])));
    }
  }
  return out;
}

NetParams netparams_yaml(const YAML::Node& node, const std::string& path) {
  NetParams p;
  bool have[4] = {};
  for_each_key(node, path,
               {"regions", "latency_ms", "upload_bps", "download_bps", "region_shares"},
               [&](const std::string& key, const YAML::Node& v, const std::string& full) {
                 if (key == "regions") return;
                 if (key == "latency_ms") {
                   if (!v.IsSequence() || v.size() != kRegionCount) {
                     throw ConfigError(full + ": expected a 6x6 matrix");
                   }
                   for (std::size_t a = 0; a < kRegionCount; ++a) {
                     if (!v[a].IsSequence() || v[a].size() != kRegionCount) {
                       throw ConfigError(full + ": expected a 6x6 matrix");
                     }
                     for (std::size_t b = 0; b < kRegionCount; ++b) {
                       p.latency_ms[a][b] = scalar<double>(v[a][b], full);
                     }
                   }
                   have[0] = true;
                 } else if (key == "upload_bps") {
                   p.upload_bps = per_region_yaml(v, full);
                   have[1] = true;
                 } else if (key == "download_bps") {
                   p.download_bps = per_region_yaml(v, full);
                   have[2] = true;
                 } else {
                   p.region_shares = per_region_yaml(v, full);
                   have[3] = true;
                 }
               });
  if (!(have[0] && have[1] && have[2] && have[3])) {
    throw ConfigError(path + ": requires latency_ms, upload_bps, download_bps, region_shares");
  }
  return p;
}

DegreeDistribution degree_yaml(const YAML::Node& node, const std::string& path) {
  std::optional<DegreeDistribution> out;
  for_each_key(node, path, {"constant", "table"},
               [&](const std::string& key, const YAML::Node& v, const std::string& full) {
                 if (out) throw ConfigError(path + ": give either constant or table");
                 if (key == "constant") {
                   out = DegreeDistribution::constant(scalar<std::uint32_t>(v, full));
                   return;
                 }
                 if (!v.IsSequence() || v.size() == 0) {
                   throw ConfigError(full + ": expected a list of [degree, weight]");
                 }
                 std::vector<DegreeDistribution::Entry> table;
                 for (std::size_t i = 0; i < v.size(); ++i) {
                   const auto item = full + "[" + std::to_string(i) + "]";
                   if (!v[i].IsSequence() || v[i].size() != 2) {
                     throw ConfigError(item + ": expected [degree, weight]");
                   }
                   table.push_back({scalar<std::uint32_t>(v[i][0], item),
                                    scalar<double>(v[i][1], item)});
                 }
                 try {
                   out = DegreeDistribution(std::move(table));
                 } catch (const ConfigError& e) {
                   throw ConfigError(full + ": " + e.what());
                 }
               });
  if (!out) throw ConfigError(path + ": give either constant or table");
  return *out;
}

const std::set<std::string> kScenarioKeys = {
    "preset",         "name",          "node_count",    "block_count",
    "block_size_bytes", "interval_ms", "internet",      "netparams_file",
    "netparams",      "cbr_enabled",   "cbr",           "degree_dist",
    "hashpower",      "seed",          "warmup_blocks", "control_message_bytes",
    "validation_ms",  "upload_policy", "high_bandwidth"};

const char* kRequiredHint =
    "required keys: preset, or all of node_count, block_size_bytes, "
    "cbr_enabled and one of internet / netparams_file / netparams";

ScenarioConfig scenario_from_node(const YAML::Node& root,
                                  const std::filesystem::path& base_dir) {
  if (!root || root.IsNull() || (root.IsMap() && root.size() == 0)) {
    throw ConfigError(std::string("empty scenario; ") + kRequiredHint);
  }
  if (!root.IsMap()) throw ConfigError("<root>: expected a mapping");

  ScenarioConfig c;
  const bool has_preset = static_cast<bool>(root["preset"]);
  if (has_preset) c = preset(scalar<std::string>(root["preset"], "preset"));

  int net_sources = 0;
  for (const char* k : {"internet", "netparams_file", "netparams"}) net_sources += root[k] ? 1 : 0;
  if (net_sources > 1) {
    throw ConfigError("give only one of internet, netparams_file, netparams");
  }
  std::set<std::string> given;
  for_each_key(root, "", kScenarioKeys,
               [&](const std::string& key, const YAML::Node& v, const std::string& path) {
    given.insert(key);
    if (key == "preset") return;
    if (key == "name") {
      c.name = scalar<std::string>(v, path);
    } else if (key == "node_count") {
      c.node_count = scalar<std::size_t>(v, path);
    } else if (key == "block_count") {
      c.block_count = scalar<std::uint64_t>(v, path);
    } else if (key == "block_size_bytes") {
      c.block_size_bytes = scalar<std::uint32_t>(v, path);
    } else if (key == "interval_ms") {
      c.interval_ms = scalar<SimTime>(v, path);
    } else if (key == "internet") {
      const int year = scalar<int>(v, path);
      try {
        c.netparams = internet_preset(year);
      } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
      }
      c.internet = year;
      c.netparams_file.clear();
    } else if (key == "netparams_file") {
      auto file = std::filesystem::path(scalar<std::string>(v, path));
      if (file.is_relative()) file = base_dir / file;
      try {
        c.netparams = load_netparams(file);
      } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
      }
      c.netparams_file = file.string();
      c.internet.reset();
    } else if (key == "netparams") {
      c.netparams = netparams_yaml(v, path);
      c.internet.reset();
      c.netparams_file.clear();
    } else if (key == "cbr_enabled") {
      c.cbr_enabled = yes_no(v, path);
    } else if (key == "cbr") {
      for_each_key(v, path,
                   {"utilization", "compact_size_bytes", "churn_ratio",
                    "p_fail_churn", "p_fail_control"},
                   [&](const std::string& k, const YAML::Node& x, const std::string& p) {
                     if (k == "utilization") c.cbr.utilization = scalar<double>(x, p);
                     if (k == "compact_size_bytes") c.cbr.compact_size_bytes = scalar<std::uint32_t>(x, p);
                     if (k == "churn_ratio") c.cbr.churn_ratio = scalar<double>(x, p);
                     if (k == "p_fail_churn") c.cbr.p_fail_churn = scalar<double>(x, p);
                     if (k == "p_fail_control") c.cbr.p_fail_control = scalar<double>(x, p);
                   });
    } else if (key == "degree_dist") {
      c.degree_dist = degree_yaml(v, path);
    } else if (key == "hashpower") {
      for_each_key(v, path, {"mean", "stddev", "floor"},
                   [&](const std::string& k, const YAML::Node& x, const std::string& p) {
                     if (k == "mean") c.hashpower.mean = scalar<double>(x, p);
                     if (k == "stddev") c.hashpower.stddev = scalar<double>(x, p);
                     if (k == "floor") c.hashpower.floor = scalar<double>(x, p);
                   });
    } else if (key == "seed") {
      c.seed = scalar<std::uint64_t>(v, path);
    } else if (key == "warmup_blocks") {
      c.warmup_blocks = scalar<std::size_t>(v, path);
    } else if (key == "control_message_bytes") {
      c.control_message_bytes = scalar<std::uint32_t>(v, path);
    } else if (key == "validation_ms") {
      c.validation_ms = scalar<SimTime>(v, path);
    } else if (key == "upload_policy") {
      try {
        c.upload_policy = parse_upload_policy(scalar<std::string>(v, path));
      } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
      }
    } else if (key == "high_bandwidth") {
      c.high_bandwidth = yes_no(v, path);
    }
  });

  if (!has_preset) {
    std::vector<std::string> missing;
    for (const char* k : {"node_count", "block_size_bytes", "cbr_enabled"}) {
      if (!given.contains(k)) missing.emplace_back(k);
    }
    if (net_sources == 0) missing.emplace_back("internet|netparams_file|netparams");
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
      throw ConfigError("missing required keys: " + list + " (" + kRequiredHint + ")");
    }
  }
  c.validate();
  return c;
}

YAML::Node parse_yaml(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML parse error: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& yaml_text,
                              const std::filesystem::path& base_dir) {
  return scenario_from_node(parse_yaml(yaml_text), base_dir);
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.parent_path());
}

std::string scenario_to_yaml(const ScenarioConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.name;
  if (!c.preset.empty()) out << YAML::Key << "preset" << YAML::Value << c.preset;
  out << YAML::Key << "node_count" << YAML::Value << c.node_count;
  out << YAML::Key << "block_count" << YAML::Value << c.block_count;
  out << YAML::Key << "block_size_bytes" << YAML::Value << c.block_size_bytes;
  out << YAML::Key << "interval_ms" << YAML::Value << c.interval_ms;
  if (c.internet) {
    out << YAML::Key << "internet" << YAML::Value << *c.internet;
  } else {
    out << YAML::Key << "netparams" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "latency_ms" << YAML::Value << YAML::BeginSeq;
    for (const auto& row : c.netparams.latency_ms) {
      out << YAML::Flow << YAML::BeginSeq;
      for (double v : row) out << v;
      out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
    const auto regions = [&](const char* key, const PerRegion<double>& values) {
      out << YAML::Key << key << YAML::Value << YAML::BeginMap;
      for (std::size_t r = 0; r < kRegionCount; ++r) {
        out << YAML::Key << std::string(to_string(kAllRegions[r])) << YAML::Value
            << values[r];
      }
      out << YAML::EndMap;
    };
    regions("upload_bps", c.netparams.upload_bps);
    regions("download_bps", c.netparams.download_bps);
    regions("region_shares", c.netparams.region_shares);
    out << YAML::EndMap;
  }
  out << YAML::Key << "cbr_enabled" << YAML::Value << c.cbr_enabled;
  out << YAML::Key << "cbr" << YAML::Value << YAML::BeginMap
      << YAML::Key << "utilization" << YAML::Value << c.cbr.utilization
      << YAML::Key << "compact_size_bytes" << YAML::Value << c.cbr.compact_size_bytes
      << YAML::Key << "churn_ratio" << YAML::Value << c.cbr.churn_ratio
      << YAML::Key << "p_fail_churn" << YAML::Value << c.cbr.p_fail_churn
      << YAML::Key << "p_fail_control" << YAML::Value << c.cbr.p_fail_control
      << YAML::EndMap;
  out << YAML::Key << "degree_dist" << YAML::Value << YAML::BeginMap;
  if (c.degree_dist.is_constant()) {
    out << YAML::Key << "constant" << YAML::Value << c.degree_dist.table().front().degree;
  } else {
    out << YAML::Key << "table" << YAML::Value << YAML::BeginSeq;
    for (const auto& e : c.degree_dist.table()) {
      out << YAML::Flow << YAML::BeginSeq << e.degree << e.weight << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  out << YAML::Key << "hashpower" << YAML::Value << YAML::BeginMap
      << YAML::Key << "mean" << YAML::Value << c.hashpower.mean
      << YAML::Key << "stddev" << YAML::Value << c.hashpower.stddev
      << YAML::Key << "floor" << YAML::Value << c.hashpower.floor << YAML::EndMap;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "warmup_blocks" << YAML::Value << c.warmup_blocks;
  out << YAML::Key << "control_message_bytes" << YAML::Value << c.control_message_bytes;
  out << YAML::Key << "validation_ms" << YAML::Value << c.validation_ms;
  out << YAML::Key << "upload_policy" << YAML::Value
      << std::string(to_string(c.upload_policy));
  out << YAML::Key << "high_bandwidth" << YAML::Value << c.high_bandwidth;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

SummaryStat summarize(const std::vector<double>& values) {
  SummaryStat s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

Report run_scenario(const ScenarioConfig& config, std::vector<std::uint64_t> seeds,
                    unsigned threads) {
  if (seeds.empty()) throw ConfigError("seeds: at least one seed is required");
  config.validate();
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  Report report;
  report.config = config;
  report.runs.resize(seeds.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        ScenarioConfig c = config;
        c.seed = seeds[i];
        report.runs[i] = Simulation(c).run();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, seeds.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> p50, p90, forks;
  for (const auto& run : report.runs) {
    p50.push_back(run.delay_p50_ms);
    p90.push_back(run.delay_p90_ms);
    forks.push_back(run.fork_rate);
  }
  report.delay_p50_ms = summarize(p50);
  report.delay_p90_ms = summarize(p90);
  report.fork_rate = summarize(forks);
  return report;
}

namespace {

const std::set<std::string> kSweepKeys = {"seeds", "seed", "seed_count", "cells",
                                          "overrides"};

}  // namespace

SweepSpec parse_sweep(const std::string& yaml_text,
                      const std::filesystem::path& base_dir) {
  const YAML::Node root = parse_yaml(yaml_text);
  if (!root || !root.IsMap()) throw ConfigError("sweep: expected a mapping");
  SweepSpec spec;
  std::optional<std::uint64_t> first_seed;
  std::optional<std::uint64_t> seed_count;
  YAML::Node overrides;
  YAML::Node cells;
  for_each_key(root, "", kSweepKeys,
               [&](const std::string& key, const YAML::Node& v, const std::string& path) {
                 if (key == "seeds") {
                   if (!v.IsSequence()) throw ConfigError("seeds: expected a list");
                   for (std::size_t i = 0; i < v.size(); ++i) {
                     spec.seeds.push_back(scalar<std::uint64_t>(
                         v[i], "seeds[" + std::to_string(i) + "]"));
                   }
                 } else if (key == "seed") {
                   first_seed = scalar<std::uint64_t>(v, path);
                 } else if (key == "seed_count") {
                   seed_count = scalar<std::uint64_t>(v, path);
                 } else if (key == "overrides") {
                   if (!v.IsMap()) throw ConfigError("overrides: expected a mapping");
                   overrides = v;
                 } else {
                   cells = v;
                 }
               });
  if (spec.seeds.empty()) {
    const std::uint64_t start = first_seed.value_or(1);
    for (std::uint64_t i = 0; i < seed_count.value_or(5); ++i) {
      spec.seeds.push_back(start + i);
    }
  }
  if (!cells || !cells.IsSequence() || cells.size() == 0) {
    throw ConfigError("cells: expected a non-empty list");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto path = "cells[" + std::to_string(i) + "]";
    YAML::Node cell;
    std::filesystem::path cell_base = base_dir;
    if (cells[i].IsScalar()) {
      // A bare string names a preset.
      cell["preset"] = cells[i].Scalar();
    } else if (cells[i].IsMap() && cells[i]["scenario"]) {
      if (cells[i].size() != 1) throw ConfigError(path + ": 'scenario' must stand alone");
      auto file = std::filesystem::path(cells[i]["scenario"].as<std::string>());
      if (file.is_relative()) file = base_dir / file;
      cell = parse_yaml(read_file(file));
      cell_base = file.parent_path();
    } else {
      cell = YAML::Clone(cells[i]);
    }
    if (overrides) {
      for (const auto& kv : overrides) cell[kv.first.as<std::string>()] = kv.second;
    }
    try {
      spec.cells.push_back(scenario_from_node(cell, cell_base));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
  return spec;
}

SweepSpec load_sweep(const std::filesystem::path& path) {
  return parse_sweep(read_file(path), path.parent_path());
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  SweepResult result;
  for (const auto& cell : spec.cells) {
    result.cells.push_back(run_scenario(cell, spec.seeds, threads));
  }

  const auto find = [&](int year, bool cbr) -> const Report* {
    for (const auto& r : result.cells) {
      if (r.config.internet == year && r.config.cbr_enabled == cbr) return &r;
    }
    return nullptr;
  };
  const auto reduction = [](double before, double after) { return 1.0 - after / before; };
  const Report* base = find(2015, false);
  if (const Report* cbr = find(2015, true); base && cbr) {
    result.effects.cbr_p50_reduction =
        reduction(base->delay_p50_ms.mean, cbr->delay_p50_ms.mean);
    result.effects.cbr_p90_reduction =
        reduction(base->delay_p90_ms.mean, cbr->delay_p90_ms.mean);
  }
  if (const Report* net = find(2019, false); base && net) {
    result.effects.internet_p50_reduction =
        reduction(base->delay_p50_ms.mean, net->delay_p50_ms.mean);
    result.effects.internet_p90_reduction =
        reduction(base->delay_p90_ms.mean, net->delay_p90_ms.mean);
  }
  return result;
}

}  // namespace blockprop
