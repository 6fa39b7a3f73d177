#include "wsn/scenario/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "wsn/error.hpp"

namespace wsn::scenario {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = value.find(',', pos);
    out.push_back(trim(value.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view text, const std::string& where) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(where + "invalid integer '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::uint64_t> parse_seeds(std::string_view value, const std::string& where) {
  std::vector<std::uint64_t> seeds;
  for (std::string_view item : split_list(value)) {
    if (item.empty()) continue;
    if (const auto dots = item.find(".."); dots != std::string_view::npos) {
      const std::uint64_t lo = parse_u64(trim(item.substr(0, dots)), where);
      const std::uint64_t hi = parse_u64(trim(item.substr(dots + 2)), where);
      if (hi < lo) throw ConfigError(where + "empty seed range '" + std::string(item) + "'");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(parse_u64(item, where));
    }
  }
  std::vector<std::uint64_t> sorted = seeds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError(where + "duplicate seed in list");
  }
  return seeds;
}

RunOutcome run_one(const ScenarioConfig& cfg) {
  RunOutcome out;
  try {
    RunResult r = run_scenario(cfg);
    out.record = std::move(r.record);
    out.dispatch_hash = r.dispatch_hash;
    out.diagnostics = r.diagnostics;
  } catch (const std::exception& e) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    out.record.scenario_id = cfg.scenario_id();
    out.record.seed = cfg.seed;
    out.record.variant = cfg.variant;
    out.record.node_count = cfg.node_count;
    out.record.proxy_mode = cfg.proxy_mode;
    out.record.throughput_kbps = nan;
    out.record.mean_delay_ms = nan;
    out.record.pdr = nan;
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  return parse_seeds(text, "seeds: ");
}

SweepSpec parse_sweep(std::string_view text, const std::string& origin) {
  SweepSpec spec;
  spec.seeds = parse_seeds("1..10", origin);
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  bool any_entry = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    any_entry = true;
    if (key == "seeds") {
      spec.seeds = parse_seeds(value, where);
    } else if (key == "parallelism") {
      const std::uint64_t p = parse_u64(value, where);
      if (p == 0) throw ConfigError(where + "parallelism must be at least 1");
      spec.parallelism = static_cast<unsigned>(p);
    } else if (key == "seed") {
      throw ConfigError(where + "use 'seeds' in a sweep file");
    } else {
      std::vector<std::string> values;
      ScenarioConfig probe;
      for (std::string_view v : split_list(value)) {
        try {
          set_config_value(probe, key, v);
        } catch (const ConfigError& e) {
          throw ConfigError(where + e.what());
        }
        values.emplace_back(v);
      }
      for (const auto& axis : axes) {
        if (axis.first == key) throw ConfigError(where + "key '" + key + "' given twice");
      }
      axes.emplace_back(key, std::move(values));
    }
  }
  if (!any_entry) return SweepSpec{};

  // Cartesian product, first axis varying slowest.
  std::vector<ScenarioConfig> grid(1);
  for (const auto& [key, values] : axes) {
    std::vector<ScenarioConfig> next;
    next.reserve(grid.size() * values.size());
    for (const ScenarioConfig& base : grid) {
      for (const std::string& v : values) {
        ScenarioConfig c = base;
        set_config_value(c, key, v);
        next.push_back(std::move(c));
      }
    }
    grid = std::move(next);
  }
  for (const ScenarioConfig& c : grid) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ": grid point " + c.scenario_id() + ": " + e.what());
    }
  }
  spec.configs = std::move(grid);
  return spec;
}

SweepSpec load_sweep(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open sweep file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sweep(ss.str(), path);
}

SweepSpec reference_grid(std::vector<std::uint64_t> seeds, unsigned parallelism,
                         const ScenarioConfig& base) {
  SweepSpec spec;
  spec.seeds = std::move(seeds);
  spec.parallelism = std::max(1u, parallelism);
  for (tcp::Variant v :
       {tcp::Variant::Tcp, tcp::Variant::Reno, tcp::Variant::NewReno, tcp::Variant::Vegas}) {
    for (std::uint32_t n : {50u, 100u, 110u}) {
      for (app::ProxyMode m :
           {app::ProxyMode::None, app::ProxyMode::Middle, app::ProxyMode::SinkNeighbor}) {
        ScenarioConfig c = base;
        c.variant = v;
        c.node_count = n;
        c.proxy_mode = m;
        spec.configs.push_back(c);
      }
    }
  }
  return spec;
}

std::vector<metrics::MetricsRecord> SweepResult::records() const {
  std::vector<metrics::MetricsRecord> out;
  out.reserve(runs.size());
  for (const RunOutcome& r : runs) out.push_back(r.record);
  return out;
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(runs.begin(), runs.end(), [](const RunOutcome& r) { return r.error.has_value(); }));
}

SweepResult run_sweep(const SweepSpec& spec, const SweepProgress& progress) {
  std::vector<ScenarioConfig> jobs;
  jobs.reserve(spec.run_count());
  for (const ScenarioConfig& c : spec.configs) {
    for (std::uint64_t seed : spec.seeds) {
      ScenarioConfig job = c;
      job.seed = seed;
      jobs.push_back(std::move(job));
    }
  }

  SweepResult result;
  result.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      result.runs[i] = run_one(jobs[i]);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(++done, jobs.size());
      }
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, spec.parallelism), jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::stable_sort(result.runs.begin(), result.runs.end(),
                   [](const RunOutcome& a, const RunOutcome& b) {
                     return metrics::key_less(a.record, b.record);
                   });
  return result;
}

}  // namespace wsn::scenario
