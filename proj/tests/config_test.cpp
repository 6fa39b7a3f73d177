#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "wsn/error.hpp"
#include "wsn/scenario/config.hpp"

namespace {

using namespace wsn::scenario;

std::string message_of(const std::string& text) {
  try {
    parse_config(text, "grid.cfg");
  } catch (const wsn::ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(Config, DefaultsAreTheReferenceSetup) {
  const ScenarioConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.area_side, 1000.0);
  EXPECT_EQ(cfg.radio_range, 100.0);
  EXPECT_EQ(cfg.proxy_count, 4u);
  EXPECT_EQ(cfg.duration_s, 200.0);
  EXPECT_EQ(cfg.warmup_s, 20.0);
  EXPECT_EQ(cfg.traffic_state, TrafficState::Medium);
  EXPECT_EQ(cfg.scenario_id(), "Tcp-n50-None-Medium");
  EXPECT_EQ(parse_config(""), cfg);
}

TEST(Config, ParsesCommentsBlankLinesAndCrLf) {
  const ScenarioConfig cfg = parse_config(
      "# reference run\r\n\r\nvariant = Vegas\r\nnode_count=110  # dense\nproxy_mode=SinkNeighbor\n"
      "traffic_state=High\nspeed_max=7.5\n");
  EXPECT_EQ(cfg.variant, wsn::tcp::Variant::Vegas);
  EXPECT_EQ(cfg.node_count, 110u);
  EXPECT_EQ(cfg.proxy_mode, wsn::app::ProxyMode::SinkNeighbor);
  EXPECT_EQ(cfg.traffic_state, TrafficState::High);
  EXPECT_EQ(cfg.speed_max, 7.5);
  EXPECT_EQ(cfg.scenario_id(), "Vegas-n110-SinkNeighbor-High");
  EXPECT_EQ(cfg.traffic_params().interval, wsn::sim::SimTime::from_seconds(1.0));
}

TEST(Config, TooFewNodesForTheProxiesIsRejected) {
  const std::string what = message_of("node_count=3\n");
  EXPECT_NE(what.find("node_count"), std::string::npos) << what;
  EXPECT_NO_THROW(parse_config("node_count=5\n"));
}

TEST(Config, UnknownKeyIsReportedWithItsLineNumber) {
  const std::string what = message_of("seed=4\n\nnodecount=50\n");
  EXPECT_NE(what.find("grid.cfg:3"), std::string::npos) << what;
  EXPECT_NE(what.find("nodecount"), std::string::npos) << what;
}

TEST(Config, MalformedValuesNameTheKey) {
  for (const char* text : {"node_count=fifty\n", "node_count=-5\n", "duration_s=1e\n",
                           "variant=Cubic\n", "proxy_mode=\n", "traffic_state=medium\n"}) {
    const std::string what = message_of(text);
    EXPECT_FALSE(what.empty()) << text;
    EXPECT_NE(what.find("grid.cfg:1"), std::string::npos) << what;
  }
  EXPECT_NE(message_of("just words\n").find("key=value"), std::string::npos);
}

TEST(Config, InvariantsAreEnforced) {
  for (const char* text :
       {"duration_s=10\nwarmup_s=10\n", "speed_min=0\n", "speed_min=3\nspeed_max=2\n",
        "proxy_count=5\n", "send_buffer_bytes=100\n", "rto_min_s=2\nrto_initial_s=1\n",
        "vegas_alpha=4\n", "vegas_loss_factor=1\n", "mobility_step_s=0\n"}) {
    EXPECT_THROW(parse_config(text), wsn::ConfigError) << text;
  }
}

TEST(Config, SerialisationRoundTripsToAnEqualConfiguration) {
  ScenarioConfig cfg;
  cfg.variant = wsn::tcp::Variant::NewReno;
  cfg.node_count = 100;
  cfg.proxy_mode = wsn::app::ProxyMode::Middle;
  cfg.seed = 123456789012345ull;
  cfg.speed_max = 4.123456789012345;
  cfg.rreq_jitter_s = 0.1 + 0.2;  // not exactly representable in short decimal
  cfg.traffic_state = TrafficState::Low;
  const std::string text = serialize_config(cfg);
  EXPECT_EQ(parse_config(text), cfg);
  EXPECT_EQ(serialize_config(parse_config(text)), text);
  for (const std::string& key : config_keys()) {
    EXPECT_NE(text.find(key + "="), std::string::npos) << key;
  }
}

TEST(Config, KeyAccessorsAgree) {
  ScenarioConfig cfg;
  set_config_value(cfg, "node_count", "110");
  EXPECT_EQ(get_config_value(cfg, "node_count"), "110");
  EXPECT_THROW(set_config_value(cfg, "colour", "blue"), wsn::ConfigError);
  EXPECT_THROW(get_config_value(cfg, "colour"), wsn::ConfigError);
}

TEST(Config, TrafficStatesMapToReportingIntervals) {
  EXPECT_EQ(reporting_interval_s(TrafficState::Low), 4.0);
  EXPECT_EQ(reporting_interval_s(TrafficState::Medium), 2.0);
  EXPECT_EQ(reporting_interval_s(TrafficState::High), 1.0);
  for (auto t : {TrafficState::Low, TrafficState::Medium, TrafficState::High}) {
    EXPECT_EQ(parse_traffic_state(to_string(t)), t);
  }
}

TEST(Config, LoadFromFile) {
  const std::string path = testing::TempDir() + "wsnsim_config_test.cfg";
  {
    std::ofstream out(path);
    out << "node_count=100\nvariant=Reno\n";
  }
  const ScenarioConfig cfg = load_config(path);
  EXPECT_EQ(cfg.scenario_id(), "Reno-n100-None-Medium");
  std::remove(path.c_str());
  EXPECT_THROW(load_config(path), wsn::IoError);
}

}  // namespace
