#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "agrosim/config.hpp"
#include "test_helpers.hpp"

namespace agrosim {
namespace {

TEST(Config, PresetOnlyDocumentMatchesPreset) {
  const ScenarioConfig c = parse_config(R"({"preset": "fl-paper"})");
  const ScenarioConfig p = preset("fl-paper");
  EXPECT_EQ(c.name, p.name);
  EXPECT_EQ(c.controller(), ControllerKind::FeedbackLinearization);
  EXPECT_DOUBLE_EQ(c.u_max, p.u_max);
  EXPECT_LT((c.initial.attitude - p.initial.attitude).norm(), 1e-15);
  EXPECT_FALSE(c.disturbance.has_value());
}

TEST(Config, DegreesBecomeRadiansAtTheBoundary) {
  const ScenarioConfig c = parse_config(R"({"preset": "fl-paper", "initial": {"attitude_deg": [-22.5, 22.5, 0]}})");
  EXPECT_NEAR(c.initial.attitude.x(), -0.39269908169872414, 1e-12);
  EXPECT_NEAR(c.initial.attitude.y(), 0.39269908169872414, 1e-12);
  EXPECT_EQ(c.initial.attitude.z(), 0.0);
  EXPECT_NEAR(c.steering.delta1, 0.7853981633974483, 1e-12);
  EXPECT_NEAR(c.steering.delta2, -0.7853981633974483, 1e-12);
}

TEST(Config, OverridesAreMergedOntoThePreset) {
  const ScenarioConfig c = parse_config(R"({"preset": "bs-paper", "name": "x", "gains": {"K1": 5}, "dt": 0.002})");
  EXPECT_EQ(c.name, "x");
  const auto& g = std::get<BsGains>(c.gains);
  EXPECT_EQ(g.k1, Vec3::Constant(5.0));
  EXPECT_EQ(g.k2, Vec3::Constant(1800.0));
  EXPECT_EQ(c.dt, 0.002);
}

TEST(Config, ScalarAndVectorGains) {
  const ScenarioConfig a = parse_config(R"({"preset": "fl-paper", "gains": {"k1": 2, "k2": [1, 2, 3]}})");
  EXPECT_EQ(std::get<FlGains>(a.gains).k1, Vec3::Constant(2.0));
  EXPECT_EQ(std::get<FlGains>(a.gains).k2, Vec3(1, 2, 3));
  EXPECT_THROW(parse_config(R"({"preset": "fl-paper", "gains": {"k1": [1, 2]}})"), ConfigError);
}

TEST(Config, NullRemovesThePresetDisturbance) {
  const ScenarioConfig c = parse_config(R"({"preset": "bs-adaptive-paper", "disturbance": null, "adaptation": false})");
  EXPECT_FALSE(c.disturbance.has_value());
  EXPECT_FALSE(c.adaptation);
}

TEST(Config, NegativeTorqueLimitIsRejected) {
  EXPECT_THROW(parse_config(R"({"preset": "fl-paper", "u_max": -1})"), InvalidParameter);
}

TEST(Config, OversizedDisturbanceIsRejected) {
  EXPECT_THROW(
      parse_config(R"({"preset": "bs-adaptive-paper", "disturbance": {"offset": [16.07605, 0, 0], "sine_amp": [0, 0, 0], "noise_sigma": [0, 0, 0]}})"),
      DisturbanceBudgetError);
}

TEST(Config, UnknownKeysNameTheOffendingPath) {
  try {
    parse_config(R"({"preset": "fl-paper", "initial": {"attitude_deg": [0, 0, 0], "attitud": [1, 2, 3]}})");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("initial.attitud"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config(R"({"preset": "fl-paper", "horizn": 2})"), ConfigError);
}

TEST(Config, MalformedDocuments) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
  EXPECT_THROW(parse_config(R"({"preset": "nope"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"preset": "fl-paper", "controller": "pid"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"preset": "fl-paper", "control_hold": "linear"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"preset": "fl-paper", "steering_deg": [45]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"preset": "fl-paper", "estimate_window_s": [1.0, 0.5]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"preset": "fl-paper", "dt": "fast"})"), ConfigError);
}

TEST(Config, StandaloneDocumentNeedsCoreKeys) {
  EXPECT_THROW(parse_config(R"({"controller": "fl"})"), ConfigError);
  const ScenarioConfig c = parse_config(R"({
    "inertias": {"J_B": [1, 1, 1], "J_W": [0.01, 0.01, 0.01], "J_mW": [0.1, 0.1, 0.1]},
    "steering_deg": [45, -45],
    "controller": "fl",
    "gains": {"k1": 10, "k2": 25},
    "u_max": 10
  })");
  EXPECT_EQ(c.name, "scenario");
  EXPECT_EQ(c.dt, 1e-3);
  EXPECT_EQ(c.horizon, 1.5);
  EXPECT_EQ(c.hold, ControlHold::Step);
}

TEST(Config, GeometryMustAgreeWithReflectedInertia) {
  EXPECT_THROW(parse_config(R"({"preset": "fl-paper",
    "inertias": {"J_B": [0.662, 0.940, 1.448], "J_W": [0.006565, 0.011689, 0.006565], "J_mW": [0.3055, 0.4103, 0.7158],
                 "geometry": {"a": 0.5, "b": 0.5, "c": 0.1, "m_W": 1.0}}})"),
               InvalidParameter);
}

TEST(Config, RoundTripPreservesEveryField) {
  for (const auto& name : preset_names()) {
    ScenarioConfig a = preset(name);
    a.hold = ControlHold::Stage;
    a.settle_band = deg_to_rad(1.5);
    a.estimate_window = {0.6, 1.1};
    const ScenarioConfig b = parse_config(serialize_config(a));
    const double tol = 1e-12;
    EXPECT_EQ(a.name, b.name);
    EXPECT_LT((a.inertias.body - b.inertias.body).norm(), tol);
    EXPECT_LT((a.inertias.wheel - b.inertias.wheel).norm(), tol);
    EXPECT_LT((a.inertias.reflected - b.inertias.reflected).norm(), tol);
    EXPECT_NEAR(a.steering.delta1, b.steering.delta1, tol);
    EXPECT_NEAR(a.steering.delta2, b.steering.delta2, tol);
    EXPECT_LT((a.initial.attitude - b.initial.attitude).norm(), tol);
    EXPECT_LT((a.initial.rate - b.initial.rate).norm(), tol);
    EXPECT_EQ(a.controller(), b.controller());
    EXPECT_EQ(a.u_max, b.u_max);
    EXPECT_EQ(a.saturation, b.saturation);
    EXPECT_EQ(a.dt, b.dt);
    EXPECT_EQ(a.horizon, b.horizon);
    EXPECT_EQ(a.hold, b.hold);
    EXPECT_EQ(a.adaptation, b.adaptation);
    EXPECT_NEAR(a.settle_band, b.settle_band, tol);
    EXPECT_EQ(a.estimate_window, b.estimate_window);
    ASSERT_EQ(a.disturbance.has_value(), b.disturbance.has_value());
    if (a.disturbance) {
      EXPECT_LT((a.disturbance->offset - b.disturbance->offset).norm(), tol);
      EXPECT_LT((a.disturbance->sine_amp - b.disturbance->sine_amp).norm(), tol);
      EXPECT_LT((a.disturbance->noise_sigma - b.disturbance->noise_sigma).norm(), tol);
      EXPECT_EQ(a.disturbance->seed, b.disturbance->seed);
    }
    if (const auto* g = std::get_if<BsGains>(&a.gains)) {
      const auto& h = std::get<BsGains>(b.gains);
      EXPECT_EQ(g->k1, h.k1);
      EXPECT_EQ(g->k2, h.k2);
      EXPECT_EQ(g->sigma, h.sigma);
    } else {
      EXPECT_EQ(std::get<FlGains>(a.gains).k1, std::get<FlGains>(b.gains).k1);
    }
  }
}

TEST(Config, ShippedSamplesParse) {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(AGROSIM_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_NO_THROW(parse_config(buf.str())) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 3);
}

}  // namespace
}  // namespace agrosim
