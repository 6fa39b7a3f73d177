#include <benchmark/benchmark.h>

#include "wsn/tcp/virtual_link.hpp"

using namespace wsn::tcp;
using wsn::sim::SimTime;

// Bulk transfer of N segments over the scripted 100 ms link with every
// 50th segment lost once.
static void BM_BulkTransfer(benchmark::State& state) {
  const auto variant = static_cast<Variant>(state.range(0));
  const auto segments = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state) {
    VirtualLinkConfig cfg;
    for (std::uint64_t s = 25; s < segments; s += 50) cfg.lose_first_tx.insert(s);
    VirtualLink link(variant, TcpParams{}, cfg);
    link.write_at(SimTime::zero(), segments * 512);
    link.run_until(SimTime::from_seconds(600.0));
    benchmark::DoNotOptimize(link.delivered_bytes());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  state.SetLabel(to_string(variant));
}
BENCHMARK(BM_BulkTransfer)
    ->ArgsProduct({{static_cast<long>(Variant::Tcp), static_cast<long>(Variant::Reno),
                    static_cast<long>(Variant::NewReno), static_cast<long>(Variant::Vegas)},
                   {2000}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
