// Hand-derived congestion-window trajectories on a scripted virtual link.
// The expectations live in the shared oracle library so the acceptance
// runner checks exactly the same points.
#include <gtest/gtest.h>

#include "oracles/oracles.hpp"

namespace {

using wsn::oracles::golden_cases;

class GoldenTrace : public ::testing::TestWithParam<std::size_t> {};

TEST_P(GoldenTrace, MatchesHandDerivedTrajectory) {
  const auto& c = golden_cases().at(GetParam());
  SCOPED_TRACE(c.name);
  for (const std::string& m : c.check()) ADD_FAILURE() << m;
}

std::string case_name(const ::testing::TestParamInfo<std::size_t>& info) {
  static const char* const names[] = {
      "RenoSingleLoss",     "TcpSingleLoss",      "NewRenoThreeLosses",
      "RenoThreeLosses",    "VegasFrozenWindow",  "VegasEarlyRetransmit",
  };
  return info.param < std::size(names) ? names[info.param] : "Case" + std::to_string(info.param);
}

INSTANTIATE_TEST_SUITE_P(AllCases, GoldenTrace,
                         ::testing::Range<std::size_t>(0, golden_cases().size()), case_name);

}  // namespace
