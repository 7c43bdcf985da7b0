#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "agrosim/errors.hpp"
#include "agrosim/sim.hpp"

namespace agrosim {

namespace paper_values {
inline const Vec3 kBodyInertia{0.662, 0.940, 1.448};
inline const Vec3 kWheelInertia{0.006565, 0.011689, 0.006565};
inline const Vec3 kReflectedInertia{0.3055, 0.4103, 0.7158};
constexpr double kDelta1Deg = 45.0;
constexpr double kDelta2Deg = -45.0;
constexpr double kTorqueLimit = 32.1521;
constexpr double kFlVelocityGain = 19.9977;
constexpr double kFlPositionGain = 122.6497;
}  // namespace paper_values

/// Isotropic-steering airborne robot released at [-22.5, 22.5, 0] deg, at rest,
/// regulated to zero attitude.
inline ScenarioConfig base_scenario() {
  ScenarioConfig c;
  c.inertias.body = paper_values::kBodyInertia;
  c.inertias.wheel = paper_values::kWheelInertia;
  c.inertias.reflected = paper_values::kReflectedInertia;
  c.steering = SteeringConfig::from_degrees(paper_values::kDelta1Deg, paper_values::kDelta2Deg);
  c.initial.attitude = deg_to_rad(Vec3(-22.5, 22.5, 0.0));
  c.u_max = paper_values::kTorqueLimit;
  c.dt = 1e-3;
  c.horizon = 1.5;
  return c;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fl-paper", "bs-paper", "bs-adaptive-paper"};
  return names;
}

inline ScenarioConfig preset(std::string_view name) {
  ScenarioConfig c = base_scenario();
  c.name = std::string(name);
  if (name == "fl-paper") {
    FlGains g;
    g.k1 = Vec3::Constant(paper_values::kFlVelocityGain);
    g.k2 = Vec3::Constant(paper_values::kFlPositionGain);
    c.gains = g;
  } else if (name == "bs-paper") {
    BsGains g;
    g.k1 = Vec3::Constant(20.0);
    g.k2 = Vec3::Constant(1800.0);
    c.gains = g;
  } else if (name == "bs-adaptive-paper") {
    BsGains g;
    g.k1 = Vec3::Constant(10.0);
    g.k2 = Vec3::Constant(200.0);
    g.sigma = Vec3::Constant(0.0005);
    c.gains = g;
    c.disturbance = DisturbanceSpec::default_for(c.u_max, 1);
    c.adaptation = true;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

}  // namespace agrosim
