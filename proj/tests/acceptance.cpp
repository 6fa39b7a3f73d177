// Acceptance runner: one PASS/FAIL line per criterion, followed by the
// evidence behind it. Exits 1 if any criterion fails.
//
//   acceptance [--seeds LIST] [--parallelism N] [--csv FILE]
//
// Criteria 4-8 need the full reference sweep (36 configurations x 10 seeds)
// and take several minutes on one core.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles/oracles.hpp"
#include "wsn/error.hpp"
#include "wsn/metrics/record.hpp"
#include "wsn/scenario/report.hpp"
#include "wsn/scenario/simulation.hpp"
#include "wsn/scenario/sweep.hpp"

namespace {

using namespace wsn;

struct Verdict {
  int id;
  std::string name;
  bool passed;
  std::vector<std::string> details;
  double seconds;
};

class Runner {
 public:
  template <typename Fn>
  void criterion(int id, std::string name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> details;
    bool passed = false;
    try {
      passed = fn(details);
    } catch (const std::exception& e) {
      details.push_back(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d. %s (%.1f s)\n", passed ? "PASS" : "FAIL", id, name.c_str(), secs);
    for (const std::string& d : details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    verdicts_.push_back(Verdict{id, std::move(name), passed, std::move(details), secs});
  }

  void summary() const {
    std::printf("\nSummary\n");
    for (const Verdict& v : verdicts_) {
      std::printf("%s %d. %s\n", v.passed ? "PASS" : "FAIL", v.id, v.name.c_str());
    }
  }

  bool all_passed() const {
    return std::all_of(verdicts_.begin(), verdicts_.end(), [](const Verdict& v) { return v.passed; });
  }

 private:
  std::vector<Verdict> verdicts_;
};

std::string csv_of(const std::vector<metrics::MetricsRecord>& records) {
  std::ostringstream os;
  metrics::write_csv(os, records);
  return os.str();
}

bool golden(std::vector<std::string>& out) {
  bool ok = true;
  for (const oracles::GoldenCase& c : oracles::golden_cases()) {
    const oracles::Mismatches m = c.check();
    out.push_back((m.empty() ? "ok: " : "FAIL: ") + c.name);
    for (const std::string& s : m) out.push_back("  " + s);
    ok = ok && m.empty();
  }
  return ok;
}

bool determinism(std::vector<std::string>& out) {
  bool ok = true;
  // Repeated runs of single configurations.
  for (const auto& [variant, mode] : {std::pair{tcp::Variant::Reno, app::ProxyMode::None},
                                      std::pair{tcp::Variant::Vegas, app::ProxyMode::Middle}}) {
    scenario::ScenarioConfig cfg;
    cfg.variant = variant;
    cfg.proxy_mode = mode;
    cfg.node_count = 100;
    cfg.seed = 7;
    std::vector<std::string> csv;
    std::vector<std::uint64_t> hash;
    for (int i = 0; i < 3; ++i) {
      const scenario::RunResult r = scenario::run_scenario(cfg);
      csv.push_back(csv_of({r.record}));
      hash.push_back(r.dispatch_hash);
    }
    const bool same = csv[0] == csv[1] && csv[1] == csv[2] && hash[0] == hash[1] &&
                      hash[1] == hash[2];
    out.push_back(std::string(same ? "ok: " : "FAIL: ") + cfg.scenario_id() +
                  " seed 7 repeated 3 times: " + (same ? "byte-identical" : "outputs differ"));
    ok = ok && same;
  }

  // A sweep slice at parallelism 1 and 4.
  scenario::SweepSpec spec = scenario::reference_grid({1, 2});
  spec.configs.erase(std::remove_if(spec.configs.begin(), spec.configs.end(),
                                    [](const scenario::ScenarioConfig& c) {
                                      return c.node_count != 50 ||
                                             c.variant == tcp::Variant::NewReno;
                                    }),
                     spec.configs.end());
  spec.parallelism = 1;
  const scenario::SweepResult serial = scenario::run_sweep(spec);
  spec.parallelism = 4;
  const scenario::SweepResult parallel = scenario::run_sweep(spec);
  bool same = csv_of(serial.records()) == csv_of(parallel.records()) &&
              serial.runs.size() == parallel.runs.size();
  for (std::size_t i = 0; same && i < serial.runs.size(); ++i) {
    same = serial.runs[i].dispatch_hash == parallel.runs[i].dispatch_hash;
  }
  out.push_back(std::string(same ? "ok: " : "FAIL: ") + std::to_string(spec.run_count()) +
                "-run sweep at parallelism 1 and 4: " +
                (same ? "identical CSV and event hashes" : "outputs differ"));
  return ok && same;
}

bool chain(std::vector<std::string>& out) {
  bool ok = true;
  for (const auto& [a, b] : {std::pair{3u, 17u}, std::pair{0u, 0u}, std::pair{31u, 5u}}) {
    const oracles::ChainOutcome r = oracles::three_node_chain(a, b);
    const bool good = r.delivered && std::abs(r.measured_us - r.expected_us) <= 1.0;
    char line[200];
    std::snprintf(line, sizeof line,
                  "%s: backoff %u/%u slots: measured %.3f us, closed form %.3f us%s",
                  good ? "ok" : "FAIL", a, b, r.measured_us, r.expected_us,
                  r.delivered ? "" : " (not delivered)");
    out.push_back(line);
    ok = ok && good;
  }
  return ok;
}

bool reliability(std::vector<std::string>& out) {
  bool ok = true;
  for (tcp::Variant v :
       {tcp::Variant::Tcp, tcp::Variant::Reno, tcp::Variant::NewReno, tcp::Variant::Vegas}) {
    int failures = 0;
    std::string first;
    for (int i = 0; i < oracles::kReliabilityTracesPerVariant; ++i) {
      const std::string e = oracles::reliability_trace(v, oracles::reliability_seed(v, i));
      if (!e.empty() && failures++ == 0) first = e;
    }
    out.push_back(std::string(failures ? "FAIL: " : "ok: ") + tcp::to_string(v) + " " +
                  std::to_string(oracles::kReliabilityTracesPerVariant - failures) + "/" +
                  std::to_string(oracles::kReliabilityTracesPerVariant) + " traces exact" +
                  (first.empty() ? "" : " (first failure: " + first + ")"));
    ok = ok && failures == 0;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Acceptance runner"};
  std::string seeds = "1..10";
  unsigned parallelism = std::max(1u, std::thread::hardware_concurrency());
  std::string csv_path;
  cli.add_option("--seeds", seeds, "Seeds for the reference sweep");
  cli.add_option("--parallelism", parallelism, "Sweep worker threads")->check(CLI::PositiveNumber);
  cli.add_option("--csv", csv_path, "Also write the reference sweep's per-run CSV here");
  CLI11_PARSE(cli, argc, argv);

  Runner runner;
  runner.criterion(1, "Golden cwnd traces", golden);
  runner.criterion(2, "Determinism", determinism);
  runner.criterion(3, "Analytic three-node chain", chain);

  // Criteria 4-8 share one reference sweep.
  scenario::Report report;
  std::string sweep_error;
  std::size_t failed_runs = 0;
  {
    const auto start = std::chrono::steady_clock::now();
    try {
      const scenario::SweepSpec spec =
          scenario::reference_grid(scenario::parse_seed_list(seeds), parallelism);
      std::printf("reference sweep: %zu runs on %u threads\n", spec.run_count(), parallelism);
      std::fflush(stdout);
      const scenario::SweepResult result = scenario::run_sweep(spec);
      failed_runs = result.failures();
      for (const scenario::RunOutcome& run : result.runs) {
        if (run.error) std::printf("run failed: %s\n", run.error->c_str());
      }
      const auto records = result.records();
      if (!csv_path.empty()) {
        std::ofstream f(csv_path, std::ios::binary);
        metrics::write_csv(f, records);
      }
      report = scenario::build_report(records);
      metrics::write_table(std::cout, report.aggregates);
      std::cout << '\n';
      scenario::write_report(std::cout, report);
      std::cout << std::flush;
    } catch (const std::exception& e) {
      sweep_error = e.what();
    }
    std::printf("reference sweep took %.1f s\n\n",
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  const char* const names[] = {"Vegas throughput deficit", "Vegas delay advantage",
                               "Proxy throughput gain", "Proxy delay cost",
                               "PDR band and message conservation"};
  for (int id = 4; id <= 8; ++id) {
    runner.criterion(id, names[id - 4], [&](std::vector<std::string>& out) {
      if (!sweep_error.empty()) {
        out.push_back("reference sweep failed: " + sweep_error);
        return false;
      }
      const auto it = std::find_if(report.checks.begin(), report.checks.end(),
                                   [id](const scenario::Check& c) { return c.id == id; });
      if (it == report.checks.end()) {
        out.push_back("no such check in the report");
        return false;
      }
      if (failed_runs) out.push_back(std::to_string(failed_runs) + " runs failed");
      const std::size_t shown = std::min<std::size_t>(it->details.size(), 40);
      out.insert(out.end(), it->details.begin(), it->details.begin() + shown);
      if (shown < it->details.size()) {
        out.push_back("... " + std::to_string(it->details.size() - shown) + " more");
      }
      return it->status == scenario::CheckStatus::Pass && failed_runs == 0;
    });
  }

  runner.criterion(9, "Reliability oracle", reliability);
  runner.summary();
  return runner.all_passed() ? 0 : 1;
}
