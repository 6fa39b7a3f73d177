#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wsn/metrics/record.hpp"

namespace wsn::scenario {

// Proxy-versus-baseline comparison for one proxy configuration.
struct RatioRow {
  std::string scenario_id;  // the proxy configuration
  std::string baseline_id;  // same variant, node count and traffic without proxies
  tcp::Variant variant = tcp::Variant::Tcp;
  std::uint32_t node_count = 0;
  app::ProxyMode proxy_mode = app::ProxyMode::Middle;
  bool available = false;  // false when the baseline is missing
  double throughput_ratio = 0.0;
  double delay_ratio = 0.0;
  double pdr_delta = 0.0;  // proxy minus baseline
};

struct Thresholds {
  std::size_t min_runs = 10;               // seeds per configuration
  double vegas_throughput_factor = 0.7;    // Vegas < factor x Reno
  double proxy_throughput_gain = 1.2;      // proxy >= gain x baseline
  double proxy_delay_factor = 1.5;         // proxy delay >= factor x baseline
  double pdr_low = 0.90;
  double pdr_high = 1.00;
};

enum class CheckStatus : std::uint8_t { Pass, Fail, Skipped };
const char* to_string(CheckStatus s);

// One trend check over configuration means. `details` lists every
// comparison made, failing ones first.
struct Check {
  int id = 0;
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  std::vector<std::string> details;
};

struct Report {
  std::vector<metrics::Aggregate> aggregates;
  std::vector<RatioRow> ratios;
  std::vector<Check> checks;

  // True when no check failed.
  bool passed() const;
};

// Ratios for every proxy configuration plus the trend checks:
//   4  Vegas throughput below the Reno factor (no proxies; 50/100/110 nodes)
//   5  Vegas has the lowest delay of the four variants (no proxies; 50/100 nodes)
//   6  proxy throughput gain for Tcp/Reno/NewReno at 100/110 nodes, both placements
//   7  proxy delay factor for Tcp/Reno/NewReno at every matched configuration
//   8  every configuration's mean PDR within the band; per-run conservation
// A check whose configurations are entirely absent is skipped; a partially
// covered check, or one with fewer than min_runs seeds, fails.
Report build_report(std::span<const metrics::MetricsRecord> records,
                    const Thresholds& thresholds = {});

void write_report(std::ostream& os, const Report& report);
std::string report_json(const Report& report);

}  // namespace wsn::scenario
