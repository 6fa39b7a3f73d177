#pragma once

#include <cstdint>
#include <random>

namespace wsn::sim {

// Independent random streams, one per simulation concern. Each is derived
// from the master seed by a fixed offset so that extra draws in one module
// never shift the sequence seen by another.
enum class StreamId : std::uint64_t {
  Placement = 1,
  Mobility = 2,
  MacBackoff = 3,
  Traffic = 4,
  Routing = 5,
};

// Seeded generator with a platform-independent output sequence. The engine
// is std::mt19937_64 (fully specified by the standard); the mapping to reals
// and integers is done here rather than through <random> distributions,
// whose algorithms are implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);
  RngStream(std::uint64_t master_seed, StreamId stream);

  std::uint64_t seed() const { return seed_; }

  // Uniform in [0, 1) with 53 bits of resolution.
  double next_unit();
  // Uniform in [lo, hi); returns lo when lo == hi. Throws ModelError if lo > hi.
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi] inclusive.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to spread master seed + stream offset.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace wsn::sim
