#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wsn/app/sections.hpp"
#include "wsn/tcp/sender.hpp"

namespace wsn::metrics {

// One row of results: a (scenario, seed) run.
struct MetricsRecord {
  std::string scenario_id;
  std::uint64_t seed = 0;
  tcp::Variant variant = tcp::Variant::Tcp;
  std::uint32_t node_count = 0;
  app::ProxyMode proxy_mode = app::ProxyMode::None;
  double throughput_kbps = 0.0;
  double mean_delay_ms = 0.0;
  double pdr = 0.0;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
};

// Total order on the key columns used for every exported table.
bool key_less(const MetricsRecord& a, const MetricsRecord& b);

inline constexpr const char* kCsvHeader =
    "scenario_id,seed,variant,node_count,proxy_mode,throughput_kbps,mean_delay_ms,pdr,"
    "generated,delivered";

// Real numbers with 6 significant digits; NaN as "nan".
std::string format_real(double v);

// Header plus one row per record, rows sorted by key.
void write_csv(std::ostream& os, std::vector<MetricsRecord> records);
// Same, to a file; throws IoError when the file cannot be written.
void export_csv(const std::string& path, std::vector<MetricsRecord> records);
// Parses a file produced by export_csv.
std::vector<MetricsRecord> read_csv(const std::string& path);
std::vector<MetricsRecord> parse_csv(std::istream& is, const std::string& origin);

// Mean and sample standard deviation per configuration across seeds.
struct Aggregate {
  std::string scenario_id;
  tcp::Variant variant = tcp::Variant::Tcp;
  std::uint32_t node_count = 0;
  app::ProxyMode proxy_mode = app::ProxyMode::None;
  std::size_t runs = 0;
  double throughput_mean = 0.0, throughput_sd = 0.0;
  double delay_mean = 0.0, delay_sd = 0.0;
  double pdr_mean = 0.0, pdr_sd = 0.0;
};

// Groups by scenario id (NaN entries of a metric are skipped for that
// metric); output sorted by (proxy_mode, variant, node_count).
std::vector<Aggregate> aggregate(std::span<const MetricsRecord> records);

void write_aggregate_csv(std::ostream& os, std::span<const Aggregate> rows);

// Human-readable tables, one per proxy mode, rows grouped by variant and
// node count, columns throughput / delay / PDR.
void write_table(std::ostream& os, std::span<const Aggregate> rows);

}  // namespace wsn::metrics
