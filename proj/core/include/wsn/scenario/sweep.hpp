#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsn/metrics/record.hpp"
#include "wsn/scenario/config.hpp"
#include "wsn/scenario/simulation.hpp"

namespace wsn::scenario {

// A grid of configurations crossed with a seed list.
struct SweepSpec {
  std::vector<ScenarioConfig> configs;  // seed field ignored; `seeds` supplies it
  std::vector<std::uint64_t> seeds;
  unsigned parallelism = 1;

  std::size_t run_count() const { return configs.size() * seeds.size(); }
};

// Grid file: the config file grammar, except that any value may be a
// comma-separated list; the grid is the cartesian product of all lists.
// Two extra keys: `seeds` (list and/or inclusive ranges such as `1..10`,
// default 1..10) and `parallelism` (default 1). A file without any entries
// is the empty sweep.
// Seed list grammar: comma-separated seeds and inclusive ranges `a..b`;
// duplicates are rejected.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

SweepSpec parse_sweep(std::string_view text, const std::string& origin = "<sweep>");
SweepSpec load_sweep(const std::string& path);

// The 4 variants x {50, 100, 110} nodes x 3 proxy modes grid over `seeds`.
SweepSpec reference_grid(std::vector<std::uint64_t> seeds, unsigned parallelism = 1,
                         const ScenarioConfig& base = {});

// Outcome of one (config, seed) run. A failed run keeps its key columns,
// reports NaN metrics and carries the error text.
struct RunOutcome {
  metrics::MetricsRecord record;
  std::optional<std::string> error;
  std::uint64_t dispatch_hash = 0;
  Diagnostics diagnostics;
};

struct SweepResult {
  std::vector<RunOutcome> runs;  // sorted by record key
  std::vector<metrics::MetricsRecord> records() const;
  std::size_t failures() const;
};

// Runs every (config, seed) pair on up to spec.parallelism threads. Runs
// share nothing mutable, and results are sorted before returning, so the
// output does not depend on the parallelism degree. `progress`, if set, is
// called after each run (serialised, in completion order).
using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;
SweepResult run_sweep(const SweepSpec& spec, const SweepProgress& progress = {});

}  // namespace wsn::scenario
