#include "wsn/scenario/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

namespace wsn::scenario {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "unknown";
}

bool Report::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const Check& c) { return c.status == CheckStatus::Fail; });
}

namespace {

using metrics::Aggregate;
using tcp::Variant;
using app::ProxyMode;

constexpr Variant kLossBased[] = {Variant::Tcp, Variant::Reno, Variant::NewReno};
constexpr Variant kAllVariants[] = {Variant::Tcp, Variant::Reno, Variant::NewReno, Variant::Vegas};
constexpr ProxyMode kProxyModes[] = {ProxyMode::Middle, ProxyMode::SinkNeighbor};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Scenario ids read "<variant>-n<nodes>-<proxy mode>-<traffic>".
std::string traffic_of(const std::string& id) {
  const auto dash = id.rfind('-');
  return dash == std::string::npos ? std::string() : id.substr(dash + 1);
}

std::string make_id(Variant v, std::uint32_t n, ProxyMode m, const std::string& traffic) {
  return std::string(tcp::to_string(v)) + "-n" + std::to_string(n) + "-" + app::to_string(m) +
         "-" + traffic;
}

class Builder {
 public:
  Builder(std::span<const metrics::MetricsRecord> records, const Thresholds& t)
      : records_(records), t_(t) {
    report_.aggregates = metrics::aggregate(records);
    for (const Aggregate& a : report_.aggregates) {
      by_id_[a.scenario_id] = &a;
      traffic_[a.proxy_mode != ProxyMode::None].insert(traffic_of(a.scenario_id));
    }
  }

  Report build() {
    ratios();
    vegas_throughput();
    vegas_delay();
    proxy_throughput();
    proxy_delay();
    pdr_band();
    return std::move(report_);
  }

 private:
  struct Outcome {
    std::vector<std::string> failed;
    std::vector<std::string> passed;
    bool any = false;

    void add(bool ok, std::string text) {
      any = true;
      (ok ? passed : failed).push_back((ok ? "ok: " : "FAIL: ") + std::move(text));
    }
  };

  const Aggregate* find(const std::string& id) const {
    const auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : it->second;
  }

  // Looks up a configuration and reports why it cannot be used.
  const Aggregate* usable(const std::string& id, Outcome& out) const {
    const Aggregate* a = find(id);
    if (!a) {
      out.add(false, id + " missing");
      return nullptr;
    }
    if (a->runs < t_.min_runs) {
      out.add(false, id + " has " + std::to_string(a->runs) + " runs, needs " +
                         std::to_string(t_.min_runs));
      return nullptr;
    }
    return a;
  }

  void finish(int id, std::string name, Outcome out, bool relevant) {
    Check c;
    c.id = id;
    c.name = std::move(name);
    if (!relevant) {
      c.status = CheckStatus::Skipped;
      c.details.push_back("no matching configurations in the input");
    } else {
      c.status = out.failed.empty() && out.any ? CheckStatus::Pass : CheckStatus::Fail;
      c.details = std::move(out.failed);
      c.details.insert(c.details.end(), out.passed.begin(), out.passed.end());
    }
    report_.checks.push_back(std::move(c));
  }

  void ratios() {
    for (const Aggregate& a : report_.aggregates) {
      if (a.proxy_mode == ProxyMode::None) continue;
      RatioRow row;
      row.scenario_id = a.scenario_id;
      row.baseline_id = make_id(a.variant, a.node_count, ProxyMode::None, traffic_of(a.scenario_id));
      row.variant = a.variant;
      row.node_count = a.node_count;
      row.proxy_mode = a.proxy_mode;
      if (const Aggregate* base = find(row.baseline_id)) {
        row.available = true;
        row.throughput_ratio = a.throughput_mean / base->throughput_mean;
        row.delay_ratio = a.delay_mean / base->delay_mean;
        row.pdr_delta = a.pdr_mean - base->pdr_mean;
      }
      report_.ratios.push_back(row);
    }
  }

  void vegas_throughput() {
    Outcome out;
    for (const std::string& traffic : traffic_[0]) {
      for (std::uint32_t n : {50u, 100u, 110u}) {
        const Aggregate* reno = usable(make_id(Variant::Reno, n, ProxyMode::None, traffic), out);
        const Aggregate* vegas = usable(make_id(Variant::Vegas, n, ProxyMode::None, traffic), out);
        if (!reno || !vegas) continue;
        const double ratio = vegas->throughput_mean / reno->throughput_mean;
        out.add(ratio < t_.vegas_throughput_factor,
                vegas->scenario_id + " throughput " + num(vegas->throughput_mean) + " vs Reno " +
                    num(reno->throughput_mean) + " (ratio " + num(ratio) + ", needs < " +
                    num(t_.vegas_throughput_factor) + ")");
      }
    }
    finish(4, "Vegas throughput deficit without proxies", std::move(out), !traffic_[0].empty());
  }

  void vegas_delay() {
    Outcome out;
    for (const std::string& traffic : traffic_[0]) {
      for (std::uint32_t n : {50u, 100u}) {
        std::vector<const Aggregate*> rows;
        for (Variant v : kAllVariants) {
          rows.push_back(usable(make_id(v, n, ProxyMode::None, traffic), out));
        }
        if (std::find(rows.begin(), rows.end(), nullptr) != rows.end()) continue;
        const Aggregate* vegas = rows.back();
        std::string others;
        bool lowest = !std::isnan(vegas->delay_mean);
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
          lowest = lowest && vegas->delay_mean < rows[i]->delay_mean;
          others += std::string(i ? ", " : "") + tcp::to_string(rows[i]->variant) + " " +
                    num(rows[i]->delay_mean);
        }
        out.add(lowest, vegas->scenario_id + " delay " + num(vegas->delay_mean) + " ms vs " +
                            others + " ms");
      }
    }
    finish(5, "Vegas lowest delay without proxies", std::move(out), !traffic_[0].empty());
  }

  void proxy_throughput() {
    Outcome out;
    for (const std::string& traffic : traffic_[1]) {
      for (Variant v : kLossBased) {
        for (std::uint32_t n : {100u, 110u}) {
          const Aggregate* base = usable(make_id(v, n, ProxyMode::None, traffic), out);
          for (ProxyMode m : kProxyModes) {
            const Aggregate* proxy = usable(make_id(v, n, m, traffic), out);
            if (!base || !proxy) continue;
            const double ratio = proxy->throughput_mean / base->throughput_mean;
            out.add(ratio >= t_.proxy_throughput_gain,
                    proxy->scenario_id + " throughput " + num(proxy->throughput_mean) + " vs " +
                        num(base->throughput_mean) + " (ratio " + num(ratio) + ", needs >= " +
                        num(t_.proxy_throughput_gain) + ")");
          }
        }
      }
    }
    finish(6, "Proxy throughput gain", std::move(out), !traffic_[1].empty());
  }

  void proxy_delay() {
    Outcome out;
    bool relevant = false;
    for (const RatioRow& row : report_.ratios) {
      if (row.variant == Variant::Vegas) continue;
      relevant = true;
      const Aggregate* base = usable(row.baseline_id, out);
      const Aggregate* proxy = usable(row.scenario_id, out);
      if (!base || !proxy) continue;
      out.add(row.delay_ratio >= t_.proxy_delay_factor,
              row.scenario_id + " delay " + num(proxy->delay_mean) + " ms vs " +
                  num(base->delay_mean) + " ms (ratio " + num(row.delay_ratio) + ", needs >= " +
                  num(t_.proxy_delay_factor) + ")");
    }
    finish(7, "Proxy delay cost", std::move(out), relevant);
  }

  void pdr_band() {
    Outcome out;
    for (const Aggregate& a : report_.aggregates) {
      if (!usable(a.scenario_id, out)) continue;
      const bool ok = a.pdr_mean >= t_.pdr_low && a.pdr_mean <= t_.pdr_high;
      out.add(ok, a.scenario_id + " mean PDR " + num(a.pdr_mean) + " (band [" + num(t_.pdr_low) +
                      ", " + num(t_.pdr_high) + "])");
    }
    for (const metrics::MetricsRecord& r : records_) {
      const std::string run = r.scenario_id + " seed " + std::to_string(r.seed);
      if (r.delivered > r.generated) {
        out.add(false, run + " delivered " + std::to_string(r.delivered) + " > generated " +
                           std::to_string(r.generated));
      } else if (std::isnan(r.pdr)) {
        out.add(false, run + " has no PDR (failed run or no traffic)");
      } else if (std::fabs(r.pdr - static_cast<double>(r.delivered) /
                                        static_cast<double>(r.generated)) > 1e-5) {
        out.add(false, run + " PDR inconsistent with its counts");
      }
    }
    finish(8, "PDR band and message conservation", std::move(out), !records_.empty());
  }

  std::span<const metrics::MetricsRecord> records_;
  Thresholds t_;
  Report report_;
  std::map<std::string, const Aggregate*> by_id_;
  std::set<std::string> traffic_[2];  // traffic states seen without / with proxies
};

}  // namespace

Report build_report(std::span<const metrics::MetricsRecord> records, const Thresholds& thresholds) {
  return Builder(records, thresholds).build();
}

void write_report(std::ostream& os, const Report& report) {
  os << "Proxy vs. no-proxy ratios\n";
  char line[200];
  std::snprintf(line, sizeof line, "%-30s %12s %12s %12s\n", "Configuration", "Throughput",
                "Delay", "PDR delta");
  os << line;
  for (const RatioRow& r : report.ratios) {
    if (r.available) {
      std::snprintf(line, sizeof line, "%-30s %12.3f %12.3f %+12.4f\n", r.scenario_id.c_str(),
                    r.throughput_ratio, r.delay_ratio, r.pdr_delta);
    } else {
      std::snprintf(line, sizeof line, "%-30s %12s %12s %12s\n", r.scenario_id.c_str(),
                    "unavailable", "unavailable", "unavailable");
    }
    os << line;
  }
  os << "\nChecks\n";
  for (const Check& c : report.checks) {
    os << "[" << to_string(c.status) << "] " << c.id << ". " << c.name << '\n';
    for (const std::string& d : c.details) os << "    " << d << '\n';
  }
  os << "\nOverall: " << (report.passed() ? "PASS" : "FAIL") << '\n';
}

std::string report_json(const Report& report) {
  using nlohmann::ordered_json;
  auto real = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  ordered_json j;
  j["passed"] = report.passed();
  ordered_json checks = ordered_json::array();
  for (const Check& c : report.checks) {
    checks.push_back({{"id", c.id},
                      {"name", c.name},
                      {"status", to_string(c.status)},
                      {"details", c.details}});
  }
  j["checks"] = checks;
  ordered_json ratios = ordered_json::array();
  for (const RatioRow& r : report.ratios) {
    ordered_json row = {{"scenario_id", r.scenario_id},
                        {"baseline_id", r.baseline_id},
                        {"available", r.available}};
    if (r.available) {
      row["throughput_ratio"] = real(r.throughput_ratio);
      row["delay_ratio"] = real(r.delay_ratio);
      row["pdr_delta"] = real(r.pdr_delta);
    }
    ratios.push_back(row);
  }
  j["ratios"] = ratios;
  return j.dump(2) + "\n";
}

}  // namespace wsn::scenario
