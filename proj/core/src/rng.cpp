#include "wsn/sim/rng.hpp"

#include <cmath>

#include "wsn/error.hpp"

namespace wsn::sim {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RngStream::RngStream(std::uint64_t master_seed, StreamId stream)
    : RngStream(mix_seed(master_seed * 0x100 + static_cast<std::uint64_t>(stream))) {}

double RngStream::next_unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  if (lo > hi) throw ModelError("uniform draw with lo > hi");
  const double u = next_unit();
  if (lo == hi) return lo;
  const double v = lo + (hi - lo) * u;
  return v < hi ? v : std::nextafter(hi, lo);
}

std::uint64_t RngStream::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw ModelError("uniform_int with lo > hi");
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return engine_();  // full 64-bit range
  // Rejection sampling keeps the result exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return lo + r % span;
}

}  // namespace wsn::sim
