// blockprop: command-line front end for the block propagation simulator.
//
//   blockprop simulate --scenario FILE [--seed N --seeds K --nodes N
//                      --blocks N --cbr on|off --internet 2015|2019
//                      --out DIR --trace]
//   blockprop derive-params --countries CSV --latency CSV --bandwidth CSV
//                           --out FILE
//   blockprop sweep --cells FILE --out DIR
//
// On failure the exit code is nonzero and stderr carries one JSON object
// {"error": <kind>, "message": <text>}.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "blockprop/netmodel.hpp"
#include "blockprop/scenario.hpp"
#include "blockprop/simulation.hpp"

namespace fs = std::filesystem;
using namespace blockprop;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

int fail(const std::string& kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
  return kind == "config" ? 2 : 1;
}

struct SimulateArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> seeds;
  std::optional<std::size_t> nodes;
  std::optional<std::uint64_t> blocks;
  std::optional<std::string> cbr;
  std::optional<int> internet;
  std::string out = "out";
  bool trace = false;
  bool dump_network = false;
  unsigned threads = 1;
};

int simulate(const SimulateArgs& args) {
  ScenarioConfig config = load_scenario(args.scenario);
  if (args.nodes) config.node_count = *args.nodes;
  if (args.blocks) config.block_count = *args.blocks;
  if (args.cbr) config.cbr_enabled = *args.cbr == "on";
  if (args.internet) {
    config.netparams = internet_preset(*args.internet);
    config.internet = *args.internet;
    config.netparams_file.clear();
  }
  config.validate();

  const std::uint64_t first = args.seed.value_or(config.seed);
  std::vector<std::uint64_t> seeds(args.seeds.value_or(1));
  std::iota(seeds.begin(), seeds.end(), first);

  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);
  write_text(out_dir / "scenario.resolved.yaml", scenario_to_yaml(config));

  Report report;
  if (!args.trace && !args.dump_network) {
    report = run_scenario(config, seeds, args.threads);
  } else {
    // Trace and network dumps need the Simulation object itself.
    report.config = config;
    for (auto seed : seeds) {
      ScenarioConfig c = config;
      c.seed = seed;
      Simulation sim(c);
      const fs::path run_dir = out_dir / ("seed_" + std::to_string(seed));
      fs::create_directories(run_dir);
      std::ofstream trace;
      if (args.trace) {
        trace.open(run_dir / "trace.csv");
        trace << "time,seq,kind,src,dst\n";
        sim.set_trace_sink(&trace);
      }
      if (args.dump_network) {
        write_network_csv(sim.network(), run_dir / "edges.csv", run_dir / "nodes.csv");
      }
      report.runs.push_back(sim.run());
      std::ofstream ledger(run_dir / "ledger.csv");
      write_ledger_csv(sim.ledger(), ledger);
    }
    std::vector<double> p50, p90, forks;
    for (const auto& r : report.runs) {
      p50.push_back(r.delay_p50_ms);
      p90.push_back(r.delay_p90_ms);
      forks.push_back(r.fork_rate);
    }
    report.delay_p50_ms = summarize(p50);
    report.delay_p90_ms = summarize(p90);
    report.fork_rate = summarize(forks);
  }

  for (const auto& run : report.runs) {
    const fs::path run_dir = out_dir / ("seed_" + std::to_string(run.seed));
    fs::create_directories(run_dir);
    write_text(run_dir / "report.json", run_report_json(config, run));
    std::ofstream blocks(run_dir / "blocks.csv");
    write_block_csv(run, blocks);
  }
  write_text(out_dir / "report.json", report_json(report));

  std::cout << config.name << ": p50 " << report.delay_p50_ms.mean << " ms, p90 "
            << report.delay_p90_ms.mean << " ms, fork rate " << report.fork_rate.mean
            << " (" << report.runs.size() << " seed(s))\n";
  return 0;
}

int derive(const std::string& countries, const std::string& latency,
           const std::string& bandwidth, const std::string& out) {
  const auto rows = read_countries(countries, fs::path(bandwidth));
  const auto params = derive_netparams(rows, read_city_latency(latency));
  save_netparams(params, out);
  std::cout << "wrote " << out << " (mean latency " << params.mean_latency_ms()
            << " ms)\n";
  return 0;
}

int sweep(const std::string& cells, const std::string& out, unsigned threads) {
  const auto spec = load_sweep(cells);
  const auto result = run_sweep(spec, threads);
  fs::create_directories(out);
  write_text(fs::path(out) / "sweep.json", sweep_json(result));
  for (const auto& cell : result.cells) {
    write_text(fs::path(out) / (cell.config.name + ".json"), report_json(cell));
    std::cout << cell.config.name << ": p50 " << cell.delay_p50_ms.mean << " ms, p90 "
              << cell.delay_p90_ms.mean << " ms, fork rate " << cell.fork_rate.mean
              << '\n';
  }
  const auto pct = [](const std::optional<double>& v) {
    return v ? std::to_string(*v * 100.0) + "%" : std::string("n/a");
  };
  std::cout << "CBR effect: p50 " << pct(result.effects.cbr_p50_reduction) << ", p90 "
            << pct(result.effects.cbr_p90_reduction) << '\n'
            << "Internet effect: p50 " << pct(result.effects.internet_p50_reduction)
            << ", p90 " << pct(result.effects.internet_p90_reduction) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator of Bitcoin block propagation"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run one scenario over one or more seeds");
  simulate_cmd->add_option("--scenario", sim.scenario, "Scenario YAML file")->required();
  simulate_cmd->add_option("--seed", sim.seed, "First seed (default: scenario seed)");
  simulate_cmd->add_option("--seeds", sim.seeds, "Number of consecutive seeds")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--nodes", sim.nodes, "Override node_count")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--blocks", sim.blocks, "Override block_count")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--cbr", sim.cbr, "Override compact block relay")
      ->check(CLI::IsMember({"on", "off"}));
  simulate_cmd->add_option("--internet", sim.internet, "Use built-in Internet parameters")
      ->check(CLI::IsMember({2015, 2019}));
  simulate_cmd->add_option("--out", sim.out, "Output directory");
  simulate_cmd->add_flag("--trace", sim.trace, "Write per-seed event trace CSV");
  simulate_cmd->add_flag("--dump-network", sim.dump_network,
                         "Write per-seed edge list and node attribute CSVs");
  simulate_cmd->add_option("--threads", sim.threads, "Worker threads for seeds")
      ->check(CLI::PositiveNumber);

  std::string countries, latency, bandwidth, params_out;
  auto* derive_cmd = app.add_subcommand("derive-params",
                                        "Derive regional parameters from per-country data");
  derive_cmd->add_option("--countries", countries, "countries.csv")->required();
  derive_cmd->add_option("--latency", latency, "city_latency.csv")->required();
  derive_cmd->add_option("--bandwidth", bandwidth, "bandwidth.csv")->required();
  derive_cmd->add_option("--out", params_out, "Output netparams.json")->required();

  std::string cells, sweep_out = "sweep";
  unsigned sweep_threads = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a list of experiment cells");
  sweep_cmd->add_option("--cells", cells, "Sweep YAML file")->required();
  sweep_cmd->add_option("--out", sweep_out, "Output directory");
  sweep_cmd->add_option("--threads", sweep_threads, "Worker threads for seeds")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (*simulate_cmd) return simulate(sim);
    if (*derive_cmd) return derive(countries, latency, bandwidth, params_out);
    if (*sweep_cmd) return sweep(cells, sweep_out, sweep_threads);
  } catch (const ConfigError& e) {
    return fail("config", e.what());
  } catch (const DataError& e) {
    return fail("data", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
