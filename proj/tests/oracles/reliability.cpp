// Reliable-delivery oracle on a randomised lossy, reordering virtual link.

#include <memory>

#include "oracles.hpp"
#include "wsn/sim/rng.hpp"
#include "wsn/tcp/virtual_link.hpp"

namespace wsn::oracles {

using sim::RngStream;
using sim::SimTime;
using namespace tcp;

std::uint64_t reliability_seed(Variant variant, int index) {
  return 1000u * static_cast<std::uint64_t>(variant) + static_cast<std::uint64_t>(index) + 1;
}

std::string reliability_trace(Variant variant, std::uint64_t seed) {
  RngStream setup(seed);
  const double data_loss = setup.uniform(0.0, 0.2);
  const double ack_loss = setup.uniform(0.0, 0.1);
  const double reorder = setup.uniform(0.0, 0.2);
  const auto rtt_ms = static_cast<std::int64_t>(setup.uniform_int(20, 400));
  const auto writes = setup.uniform_int(1, 30);

  auto rng = std::make_shared<RngStream>(seed ^ 0x5eedULL);
  VirtualLinkConfig cfg;
  cfg.rtt = SimTime::from_us(rtt_ms * 1000);
  cfg.handshake = setup.uniform_int(0, 1) == 1;
  if (setup.uniform_int(0, 1) == 1) cfg.service_time = SimTime::from_us(2'000);
  cfg.lose_data = [rng, data_loss](const Transmit&, std::uint64_t) {
    return rng->next_unit() < data_loss;
  };
  cfg.lose_ack = [rng, ack_loss](std::uint64_t) { return rng->next_unit() < ack_loss; };
  cfg.extra_delay = [rng, reorder, rtt_ms](const Transmit&, std::uint64_t) {
    if (rng->next_unit() >= reorder) return SimTime::zero();
    return SimTime::from_us(static_cast<std::int64_t>(rng->uniform(0.0, rtt_ms * 1000.0)));
  };

  VirtualLink link(variant, TcpParams{}, cfg);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < writes; ++i) {
    const auto bytes = setup.uniform_int(1, 3000);
    total += bytes;
    link.write_at(SimTime::from_seconds(setup.uniform(0.0, 5.0)), bytes);
  }
  link.run_until(SimTime::from_seconds(3000.0));

  const std::string where = std::string(to_string(variant)) + " seed " + std::to_string(seed) + ": ";
  if (link.sender().stats().resets != 0) return where + "connection reset";
  std::uint64_t expect_next = 0;
  for (const auto& [first, last] : link.delivered()) {
    if (first != expect_next || last <= first) {
      return where + "delivered range [" + std::to_string(first) + "," + std::to_string(last) +
             ") does not continue at " + std::to_string(expect_next);
    }
    expect_next = last;
  }
  if (expect_next != total) {
    return where + "delivered " + std::to_string(expect_next) + " of " + std::to_string(total) +
           " bytes";
  }
  return {};
}

}  // namespace wsn::oracles
