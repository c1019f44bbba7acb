#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "blockprop/scenario_config.hpp"
#include "blockprop/simulation.hpp"

namespace blockprop {

/// Names of the built-in presets. The per-year presets use that year's node
/// count and block size; the `cmp_` presets hold 9000 nodes and 1 MB blocks
/// fixed so that only the Internet and the relay protocol vary.
std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

/// Parses a YAML scenario. Relative `netparams_file` paths resolve against
/// `base_dir`. Throws ConfigError with the offending key path.
ScenarioConfig parse_scenario(const std::string& yaml_text,
                              const std::filesystem::path& base_dir = ".");
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Canonical YAML for a resolved config; parse_scenario accepts it back.
std::string scenario_to_yaml(const ScenarioConfig& config);

struct SummaryStat {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single run
};

SummaryStat summarize(const std::vector<double>& values);

struct Report {
  ScenarioConfig config;
  std::vector<RunResult> runs;  // ordered by seed
  SummaryStat delay_p50_ms;
  SummaryStat delay_p90_ms;
  SummaryStat fork_rate;
};

/// One full simulation per seed. Runs may execute on up to `threads` worker
/// threads; the report does not depend on completion order.
Report run_scenario(const ScenarioConfig& config, std::vector<std::uint64_t> seeds,
                    unsigned threads = 1);

std::string run_report_json(const ScenarioConfig& config, const RunResult& run);
std::string report_json(const Report& report);

/// `block_id,p50_ms,p90_ms,reached_all`; undefined percentiles are empty.
void write_block_csv(const RunResult& run, std::ostream& out);
/// `block_id,parent,height,minter,mint_time,on_main_chain`.
void write_ledger_csv(const BlockLedger& ledger, std::ostream& out);

/// A list of experiment cells sharing one seed list.
struct SweepSpec {
  std::vector<ScenarioConfig> cells;
  std::vector<std::uint64_t> seeds;
};

SweepSpec parse_sweep(const std::string& yaml_text,
                      const std::filesystem::path& base_dir = ".");
SweepSpec load_sweep(const std::filesystem::path& path);

/// Relative reductions between the standard cells; set when the sweep holds
/// the matching (Internet year, CBR) cells.
struct SweepEffects {
  std::optional<double> cbr_p50_reduction;
  std::optional<double> cbr_p90_reduction;
  std::optional<double> internet_p50_reduction;
  std::optional<double> internet_p90_reduction;
};

struct SweepResult {
  std::vector<Report> cells;
  SweepEffects effects;
};

SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 1);
std::string sweep_json(const SweepResult& result);

}  // namespace blockprop
