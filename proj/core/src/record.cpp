#include "wsn/metrics/record.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

#include "wsn/error.hpp"

namespace wsn::metrics {

bool key_less(const MetricsRecord& a, const MetricsRecord& b) {
  return std::tie(a.scenario_id, a.seed, a.variant, a.node_count, a.proxy_mode) <
         std::tie(b.scenario_id, b.seed, b.variant, b.node_count, b.proxy_mode);
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_csv(std::ostream& os, std::vector<MetricsRecord> records) {
  std::stable_sort(records.begin(), records.end(), key_less);
  os << kCsvHeader << '\n';
  for (const MetricsRecord& r : records) {
    os << r.scenario_id << ',' << r.seed << ',' << tcp::to_string(r.variant) << ','
       << r.node_count << ',' << app::to_string(r.proxy_mode) << ','
       << format_real(r.throughput_kbps) << ',' << format_real(r.mean_delay_ms) << ','
       << format_real(r.pdr) << ',' << r.generated << ',' << r.delivered << '\n';
  }
}

void export_csv(const std::string& path, std::vector<MetricsRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_csv(out, std::move(records));
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& s) {
  if (s == "nan") return std::nan("");
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

std::uint64_t parse_count(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

}  // namespace

std::vector<MetricsRecord> parse_csv(std::istream& is, const std::string& origin) {
  std::vector<MetricsRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kCsvHeader) throw ConfigError(origin + ": unexpected CSV header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line);
    const auto where = origin + ":" + std::to_string(line_no);
    if (f.size() != 10) throw ConfigError(where + ": expected 10 columns");
    try {
      MetricsRecord r;
      r.scenario_id = f[0];
      r.seed = parse_count(f[1]);
      const auto v = tcp::parse_variant(f[2]);
      if (!v) throw ConfigError(where + ": unknown variant " + f[2]);
      r.variant = *v;
      r.node_count = static_cast<std::uint32_t>(parse_count(f[3]));
      const auto m = app::parse_proxy_mode(f[4]);
      if (!m) throw ConfigError(where + ": unknown proxy mode " + f[4]);
      r.proxy_mode = *m;
      r.throughput_kbps = parse_real(f[5]);
      r.mean_delay_ms = parse_real(f[6]);
      r.pdr = parse_real(f[7]);
      r.generated = parse_count(f[8]);
      r.delivered = parse_count(f[9]);
      out.push_back(std::move(r));
    } catch (const std::invalid_argument&) {
      throw ConfigError(where + ": malformed number");
    } catch (const std::out_of_range&) {
      throw ConfigError(where + ": number out of range");
    }
  }
  return out;
}

std::vector<MetricsRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return parse_csv(in, path);
}

namespace {

struct Stat {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  void add(double v) {
    if (std::isnan(v)) return;
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : std::nan(""); }
  double sd() const {
    if (n < 2) return n == 1 ? 0.0 : std::nan("");
    const double m = mean();
    return std::sqrt(std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1)));
  }
};

}  // namespace

std::vector<Aggregate> aggregate(std::span<const MetricsRecord> records) {
  // Deterministic regardless of input order: sort first, then accumulate.
  std::vector<MetricsRecord> sorted(records.begin(), records.end());
  std::stable_sort(sorted.begin(), sorted.end(), key_less);
  std::map<std::string, std::pair<Aggregate, std::array<Stat, 3>>> groups;
  for (const MetricsRecord& r : sorted) {
    auto& [agg, stats] = groups[r.scenario_id];
    agg.scenario_id = r.scenario_id;
    agg.variant = r.variant;
    agg.node_count = r.node_count;
    agg.proxy_mode = r.proxy_mode;
    ++agg.runs;
    stats[0].add(r.throughput_kbps);
    stats[1].add(r.mean_delay_ms);
    stats[2].add(r.pdr);
  }
  std::vector<Aggregate> out;
  for (auto& [id, entry] : groups) {
    auto& [agg, stats] = entry;
    agg.throughput_mean = stats[0].mean();
    agg.throughput_sd = stats[0].sd();
    agg.delay_mean = stats[1].mean();
    agg.delay_sd = stats[1].sd();
    agg.pdr_mean = stats[2].mean();
    agg.pdr_sd = stats[2].sd();
    out.push_back(agg);
  }
  std::sort(out.begin(), out.end(), [](const Aggregate& a, const Aggregate& b) {
    return std::tie(a.proxy_mode, a.variant, a.node_count, a.scenario_id) <
           std::tie(b.proxy_mode, b.variant, b.node_count, b.scenario_id);
  });
  return out;
}

void write_aggregate_csv(std::ostream& os, std::span<const Aggregate> rows) {
  os << "scenario_id,variant,node_count,proxy_mode,runs,throughput_kbps_mean,throughput_kbps_sd,"
        "mean_delay_ms_mean,mean_delay_ms_sd,pdr_mean,pdr_sd\n";
  for (const Aggregate& a : rows) {
    os << a.scenario_id << ',' << tcp::to_string(a.variant) << ',' << a.node_count << ','
       << app::to_string(a.proxy_mode) << ',' << a.runs << ',' << format_real(a.throughput_mean)
       << ',' << format_real(a.throughput_sd) << ',' << format_real(a.delay_mean) << ','
       << format_real(a.delay_sd) << ',' << format_real(a.pdr_mean) << ','
       << format_real(a.pdr_sd) << '\n';
  }
}

namespace {

const char* table_title(app::ProxyMode mode) {
  switch (mode) {
    case app::ProxyMode::None: return "Network without proxy nodes";
    case app::ProxyMode::Middle: return "Proxy nodes in the middle of their sections";
    case app::ProxyMode::SinkNeighbor: return "Proxy nodes next to the sink";
  }
  return "";
}

std::string mean_sd(double mean, double sd, int precision) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision);
  if (std::isnan(mean)) return "n/a";
  s << mean;
  if (!std::isnan(sd)) s << " +/- " << sd;
  return s.str();
}

}  // namespace

void write_table(std::ostream& os, std::span<const Aggregate> rows) {
  bool first = true;
  for (app::ProxyMode mode :
       {app::ProxyMode::None, app::ProxyMode::Middle, app::ProxyMode::SinkNeighbor}) {
    std::vector<const Aggregate*> sel;
    for (const Aggregate& a : rows) {
      if (a.proxy_mode == mode) sel.push_back(&a);
    }
    if (sel.empty()) continue;
    if (!first) os << '\n';
    first = false;
    os << table_title(mode) << '\n';
    os << std::left << std::setw(10) << "Protocol" << std::setw(8) << "Nodes" << std::setw(6)
       << "Runs" << std::setw(24) << "Throughput (Kbps)" << std::setw(26)
       << "End-to-End Delay (ms)" << "Packet Delivery Ratio" << '\n';
    for (const Aggregate* a : sel) {
      os << std::left << std::setw(10) << tcp::to_string(a->variant) << std::setw(8)
         << a->node_count << std::setw(6) << a->runs << std::setw(24)
         << mean_sd(a->throughput_mean, a->throughput_sd, 2) << std::setw(26)
         << mean_sd(a->delay_mean, a->delay_sd, 3) << mean_sd(a->pdr_mean, a->pdr_sd, 4) << '\n';
    }
  }
}

}  // namespace wsn::metrics
