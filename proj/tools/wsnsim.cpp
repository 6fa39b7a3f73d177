// wsnsim: command-line front end for the sensor-network simulator.
//
//   wsnsim run    [--config FILE] [--<key> VALUE ...] [--seed N] [--out FILE]
//   wsnsim sweep  (--grid FILE | --reference) [--seeds LIST] [--parallelism N]
//                 [--out FILE] [--aggregate FILE]
//   wsnsim report FILE... [--json FILE] [--min-runs N]
//   wsnsim trace  [--config FILE] [--<key> VALUE ...] [--node ID] [--out FILE]
//
// Exit codes: 0 success, 1 an acceptance check failed, 2 bad input or I/O
// error, 3 internal model error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "wsn/error.hpp"
#include "wsn/metrics/record.hpp"
#include "wsn/scenario/config.hpp"
#include "wsn/scenario/report.hpp"
#include "wsn/scenario/simulation.hpp"
#include "wsn/scenario/sweep.hpp"

namespace {

using namespace wsn;

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitModelError = 3;

// Options shared by the commands that describe one scenario.
struct ScenarioOptions {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App& cmd) {
    cmd.add_option("--config", config_path, "key=value configuration file")
        ->check(CLI::ExistingFile);
    for (const std::string& key : scenario::config_keys()) {
      cmd.add_option_function<std::string>(
          "--" + key, [this, key](const std::string& v) { overrides[key] = v; },
          "override '" + key + "'");
    }
  }

  scenario::ScenarioConfig resolve() const {
    scenario::ScenarioConfig cfg =
        config_path.empty() ? scenario::ScenarioConfig{} : scenario::load_config(config_path);
    for (const auto& [key, value] : overrides) {
      try {
        scenario::set_config_value(cfg, key, value);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("--") + key + ": " + e.what());
      }
    }
    cfg.validate();
    return cfg;
  }
};

// Writes to `path`, or stdout when empty.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  fn(out);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

void print_diagnostics(const scenario::RunResult& r) {
  const auto& d = r.diagnostics;
  std::fprintf(stderr,
               "%s seed %llu: throughput %.3f Kbps, delay %.3f ms, pdr %.4f (%llu/%llu)\n"
               "  sensors %u, connections %u, blocked ticks %llu, lost on reset %llu\n"
               "  tcp: segments %llu, retransmits %llu, timeouts %llu, fast retransmits %llu, "
               "resets %llu\n"
               "  mac: transmissions %llu, retry drops %llu, corrupted %llu; routing: rreq %llu, "
               "link breaks %llu\n"
               "  events %llu, dispatch hash %016llx\n",
               r.record.scenario_id.c_str(), static_cast<unsigned long long>(r.record.seed),
               r.record.throughput_kbps, r.record.mean_delay_ms, r.record.pdr,
               static_cast<unsigned long long>(r.record.delivered),
               static_cast<unsigned long long>(r.record.generated), d.sensors, d.connections,
               static_cast<unsigned long long>(d.blocked_ticks),
               static_cast<unsigned long long>(d.lost_on_reset),
               static_cast<unsigned long long>(d.tcp.segments_sent),
               static_cast<unsigned long long>(d.tcp.retransmits),
               static_cast<unsigned long long>(d.tcp.timeouts),
               static_cast<unsigned long long>(d.tcp.fast_retransmits),
               static_cast<unsigned long long>(d.tcp.resets),
               static_cast<unsigned long long>(d.mac.transmissions),
               static_cast<unsigned long long>(d.mac.retry_drops),
               static_cast<unsigned long long>(d.mac.corrupted_receptions),
               static_cast<unsigned long long>(d.routing.rreq_sent),
               static_cast<unsigned long long>(d.routing.link_breaks),
               static_cast<unsigned long long>(d.events),
               static_cast<unsigned long long>(r.dispatch_hash));
}

int cmd_run(const ScenarioOptions& opts, const std::string& out, bool quiet) {
  const scenario::RunResult r = scenario::run_scenario(opts.resolve());
  with_output(out, [&](std::ostream& os) { metrics::write_csv(os, {r.record}); });
  if (!quiet) print_diagnostics(r);
  return 0;
}

int cmd_sweep(const std::string& grid, bool reference, const std::string& seeds,
              std::optional<unsigned> parallelism, const std::string& out,
              const std::string& aggregate_out, bool quiet) {
  scenario::SweepSpec spec;
  if (reference) {
    spec = scenario::reference_grid(scenario::parse_seed_list(seeds.empty() ? "1..10" : seeds),
                                    std::max(1u, std::thread::hardware_concurrency()));
  } else {
    spec = scenario::load_sweep(grid);
    if (!seeds.empty() && !spec.configs.empty()) spec.seeds = scenario::parse_seed_list(seeds);
  }
  if (parallelism) spec.parallelism = *parallelism;

  const scenario::SweepResult result = scenario::run_sweep(
      spec, quiet ? scenario::SweepProgress{} : [](std::size_t done, std::size_t total) {
        std::fprintf(stderr, "\r%zu/%zu runs", done, total);
        if (done == total) std::fputc('\n', stderr);
      });
  for (const scenario::RunOutcome& run : result.runs) {
    if (run.error) std::fprintf(stderr, "run failed: %s\n", run.error->c_str());
  }

  const auto records = result.records();
  with_output(out, [&](std::ostream& os) { metrics::write_csv(os, records); });
  const auto rows = metrics::aggregate(records);
  if (!aggregate_out.empty()) {
    with_output(aggregate_out, [&](std::ostream& os) { metrics::write_aggregate_csv(os, rows); });
  }
  if (!out.empty()) metrics::write_table(std::cout, rows);
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& json_out,
               std::size_t min_runs) {
  std::vector<metrics::MetricsRecord> records;
  for (const std::string& path : inputs) {
    auto part = metrics::read_csv(path);
    records.insert(records.end(), part.begin(), part.end());
  }
  scenario::Thresholds thresholds;
  thresholds.min_runs = min_runs;
  const scenario::Report report = scenario::build_report(records, thresholds);
  metrics::write_table(std::cout, report.aggregates);
  std::cout << '\n';
  scenario::write_report(std::cout, report);
  if (!json_out.empty()) {
    with_output(json_out, [&](std::ostream& os) { os << scenario::report_json(report); });
  }
  return report.passed() ? 0 : kExitCheckFailed;
}

int cmd_trace(const ScenarioOptions& opts, std::optional<std::uint32_t> node,
              const std::string& out) {
  scenario::ScenarioConfig cfg = opts.resolve();
  scenario::RunOptions run_options;
  run_options.trace_node = node.value_or(1);
  const scenario::RunResult r = scenario::run_scenario(cfg, run_options);
  with_output(out, [&](std::ostream& os) {
    os << "t_s,cwnd,ssthresh,state\n";
    char line[128];
    for (const tcp::TracePoint& p : r.trace) {
      std::snprintf(line, sizeof line, "%.9f,%.6g,%.6g,%s\n", p.t.seconds(), p.cwnd, p.ssthresh,
                    tcp::to_string(p.state));
      os << line;
    }
  });
  if (r.trace.empty()) {
    std::fprintf(stderr, "node %u originates no connection in %s\n", *run_options.trace_node,
                 cfg.scenario_id().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless sensor network TCP / proxy-aggregation simulator"};
  app.require_subcommand(1);

  ScenarioOptions run_opts;
  std::string run_out;
  bool run_quiet = false;
  CLI::App* run = app.add_subcommand("run", "Run one scenario and print its metrics row as CSV");
  run_opts.attach(*run);
  run->add_option("--out", run_out, "CSV output file (default stdout)");
  run->add_flag("--quiet", run_quiet, "Suppress the diagnostics summary on stderr");

  std::string grid, seeds, sweep_out, aggregate_out;
  bool reference = false, sweep_quiet = false;
  std::optional<unsigned> parallelism;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a grid of scenarios over several seeds");
  auto* grid_opt = sweep->add_option("--grid", grid, "Sweep grid file")->check(CLI::ExistingFile);
  auto* ref_opt = sweep->add_flag("--reference", reference,
                                  "The 4 variants x {50,100,110} nodes x 3 proxy modes grid");
  grid_opt->excludes(ref_opt);
  sweep->add_option("--seeds", seeds, "Seed list, e.g. 1..10 or 1,2,5 (default 1..10)");
  sweep->add_option("--parallelism", parallelism, "Worker threads")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", sweep_out, "Per-run CSV output file (default stdout)");
  sweep->add_option("--aggregate", aggregate_out, "Per-configuration mean/sd CSV output file");
  sweep->add_flag("--quiet", sweep_quiet, "No progress output");

  std::vector<std::string> report_inputs;
  std::string report_json_out;
  std::size_t min_runs = scenario::Thresholds{}.min_runs;
  CLI::App* report = app.add_subcommand(
      "report", "Compare proxy and non-proxy results and check the acceptance thresholds");
  report->add_option("inputs", report_inputs, "Per-run CSV files")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--json", report_json_out, "Machine-readable pass/fail summary");
  report->add_option("--min-runs", min_runs, "Seeds required per configuration");

  ScenarioOptions trace_opts;
  std::optional<std::uint32_t> trace_node;
  std::string trace_out;
  CLI::App* trace = app.add_subcommand(
      "trace", "Dump the congestion-window trajectory of one node's connection");
  trace_opts.attach(*trace);
  trace->add_option("--node", trace_node, "Originating node id (default 1)");
  trace->add_option("--out", trace_out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (*run) return cmd_run(run_opts, run_out, run_quiet);
    if (*sweep) {
      if (grid.empty() && !reference) throw ConfigError("sweep needs --grid FILE or --reference");
      return cmd_sweep(grid, reference, seeds, parallelism, sweep_out, aggregate_out, sweep_quiet);
    }
    if (*report) return cmd_report(report_inputs, report_json_out, min_runs);
    if (*trace) return cmd_trace(trace_opts, trace_node, trace_out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  } catch (const ModelError& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitModelError;
  }
  return 0;
}
