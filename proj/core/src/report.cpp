#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

#include "blockprop/scenario.hpp"

namespace blockprop {

using nlohmann::ordered_json;

namespace {

ordered_json per_region(const PerRegion<double>& values) {
  ordered_json out = ordered_json::object();
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    out[std::string(to_string(kAllRegions[r]))] = values[r];
  }
  return out;
}

ordered_json config_json(const ScenarioConfig& c) {
  ordered_json j;
  j["name"] = c.name;
  j["preset"] = c.preset;
  j["node_count"] = c.node_count;
  j["block_count"] = c.block_count;
  j["block_size_bytes"] = c.block_size_bytes;
  j["interval_ms"] = c.interval_ms;
  if (c.internet) {
    j["internet"] = *c.internet;
  } else {
    j["internet"] = nullptr;
  }
  j["netparams_file"] = c.netparams_file;
  j["netparams"] = {{"latency_ms", c.netparams.latency_ms},
                    {"upload_bps", per_region(c.netparams.upload_bps)},
                    {"download_bps", per_region(c.netparams.download_bps)},
                    {"region_shares", per_region(c.netparams.region_shares)}};
  j["cbr_enabled"] = c.cbr_enabled;
  j["cbr"] = {{"utilization", c.cbr.utilization},
              {"compact_size_bytes", c.cbr.compact_size_bytes},
              {"churn_ratio", c.cbr.churn_ratio},
              {"p_fail_churn", c.cbr.p_fail_churn},
              {"p_fail_control", c.cbr.p_fail_control}};
  ordered_json degrees = ordered_json::array();
  for (const auto& e : c.degree_dist.table()) degrees.push_back({e.degree, e.weight});
  j["degree_dist"] = degrees;
  j["hashpower"] = {{"mean", c.hashpower.mean},
                    {"stddev", c.hashpower.stddev},
                    {"floor", c.hashpower.floor}};
  j["seed"] = c.seed;
  j["warmup_blocks"] = c.warmup_blocks;
  j["control_message_bytes"] = c.control_message_bytes;
  j["validation_ms"] = c.validation_ms;
  j["upload_policy"] = std::string(to_string(c.upload_policy));
  j["high_bandwidth"] = c.high_bandwidth;
  return j;
}

std::string hex64(std::uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(value));
  return buf;
}

ordered_json run_json(const std::string& scenario, const RunResult& run) {
  ordered_json j;
  j["scenario"] = scenario;
  j["seed"] = run.seed;
  j["blocks"] = run.blocks;
  j["delay_p50_ms"] = run.delay_p50_ms;
  j["delay_p90_ms"] = run.delay_p90_ms;
  j["fork_rate"] = run.fork_rate;
  j["undefined_percentile_blocks"] = {{"p50", run.undefined_p50_blocks},
                                      {"p90", run.undefined_p90_blocks}};
  j["mean_interblock_ms"] = run.mean_interblock_ms;
  ordered_json messages = ordered_json::object();
  ordered_json bytes = ordered_json::object();
  for (std::size_t k = 0; k < kMessageKindCount; ++k) {
    const std::string name(to_string(static_cast<MessageKind>(k)));
    messages[name] = run.counters.messages[k];
    bytes[name] = run.counters.bytes[k];
  }
  j["messages"] = messages;
  j["bytes"] = bytes;
  j["compact_receptions"] = {{"churn", run.counters.compact_receptions[0]},
                             {"control", run.counters.compact_receptions[1]}};
  j["reconstruction_failures"] = {{"churn", run.counters.reconstruction_failures[0]},
                                  {"control", run.counters.reconstruction_failures[1]}};
  j["protocol_errors"] = run.counters.protocol_errors;
  j["events_dispatched"] = run.events_dispatched;
  j["trace_hash"] = hex64(run.trace_hash);
  return j;
}

ordered_json summary_json(const SummaryStat& s) {
  return {{"mean", s.mean}, {"stddev", s.stddev}};
}

ordered_json report_object(const Report& report) {
  ordered_json j;
  j["scenario"] = report.config.name;
  ordered_json seeds = ordered_json::array();
  for (const auto& r : report.runs) seeds.push_back(r.seed);
  j["seeds"] = seeds;
  j["delay_p50_ms"] = summary_json(report.delay_p50_ms);
  j["delay_p90_ms"] = summary_json(report.delay_p90_ms);
  j["fork_rate"] = summary_json(report.fork_rate);
  ordered_json runs = ordered_json::array();
  for (const auto& r : report.runs) runs.push_back(run_json(report.config.name, r));
  j["runs"] = runs;
  j["config"] = config_json(report.config);
  return j;
}

}  // namespace

std::string run_report_json(const ScenarioConfig& config, const RunResult& run) {
  ordered_json j = run_json(config.name, run);
  ScenarioConfig resolved = config;
  resolved.seed = run.seed;
  j["config"] = config_json(resolved);
  return j.dump(2) + "\n";
}

std::string report_json(const Report& report) {
  return report_object(report).dump(2) + "\n";
}

std::string sweep_json(const SweepResult& result) {
  ordered_json j;
  ordered_json cells = ordered_json::array();
  for (const auto& r : result.cells) cells.push_back(report_object(r));
  const auto opt = [](const std::optional<double>& v) -> ordered_json {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  j["effects"] = {{"cbr_p50_reduction", opt(result.effects.cbr_p50_reduction)},
                  {"cbr_p90_reduction", opt(result.effects.cbr_p90_reduction)},
                  {"internet_p50_reduction", opt(result.effects.internet_p50_reduction)},
                  {"internet_p90_reduction", opt(result.effects.internet_p90_reduction)}};
  j["cells"] = cells;
  return j.dump(2) + "\n";
}

void write_block_csv(const RunResult& run, std::ostream& out) {
  out << "block_id,p50_ms,p90_ms,reached_all\n";
  for (const auto& b : run.block_stats) {
    out << b.id << ',';
    if (b.p50_ms) out << *b.p50_ms;
    out << ',';
    if (b.p90_ms) out << *b.p90_ms;
    out << ',' << (b.reached_all ? 1 : 0) << '\n';
  }
}

void write_ledger_csv(const BlockLedger& ledger, std::ostream& out) {
  const auto main_chain = ledger.main_chain_mask(ledger.best_tip().id);
  out << "block_id,parent,height,minter,mint_time,on_main_chain\n";
  for (const auto& b : ledger.blocks()) {
    if (b.id == kGenesis) continue;
    out << b.id << ',' << b.parent << ',' << b.height << ',' << b.minter << ','
        << b.mint_time << ',' << (main_chain[b.id] ? 1 : 0) << '\n';
  }
}

}  // namespace blockprop
