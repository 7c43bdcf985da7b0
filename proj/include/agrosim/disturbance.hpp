#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "agrosim/errors.hpp"
#include "agrosim/types.hpp"

namespace agrosim {

/// External torque disturbance: constant offset + sinusoid + Gaussian noise.
struct DisturbanceSpec {
  Vec3 offset = Vec3::Zero();      // N m
  Vec3 sine_amp = Vec3::Zero();    // N m
  double sine_freq = 2.0;          // rad/s
  Vec3 sine_phase = Vec3::Zero();  // rad
  Vec3 noise_sigma = Vec3::Zero(); // N m
  std::uint64_t seed = 1;

  // Fractions of the control limit each component must stay under.
  static constexpr double kOffsetBudget = 0.20;
  static constexpr double kSineBudget = 0.20;
  static constexpr double kNoiseBudget = 0.05;

  /// Offset and sine at 15% of u_max, noise sigma at u_max/60 so 3 sigma sits at 5%.
  static DisturbanceSpec default_for(double u_max, std::uint64_t seed = 1) {
    DisturbanceSpec d;
    d.offset = Vec3::Constant(0.15 * u_max);
    d.sine_amp = Vec3::Constant(0.15 * u_max);
    d.sine_freq = 2.0;
    d.noise_sigma = Vec3::Constant(u_max / 60.0);
    d.seed = seed;
    return d;
  }

  static DisturbanceSpec constant(const Vec3& offset) {
    DisturbanceSpec d;
    d.offset = offset;
    return d;
  }

  void validate(double u_max) const {
    if (!offset.allFinite() || !sine_amp.allFinite() || !sine_phase.allFinite() || !noise_sigma.allFinite() ||
        !std::isfinite(sine_freq)) {
      throw InvalidParameter("disturbance parameters must be finite");
    }
    if ((noise_sigma.array() < 0.0).any()) throw InvalidParameter("disturbance noise_sigma must be non-negative");
    // 1e-12 relative slack so u_max/60 sits on the 5% noise boundary.
    const double slack = 1.0 + 1e-12;
    for (int i = 0; i < 3; ++i) {
      if (std::abs(offset[i]) > kOffsetBudget * u_max * slack) {
        throw DisturbanceBudgetError("disturbance offset[" + std::to_string(i) + "] exceeds 20% of u_max");
      }
      if (std::abs(sine_amp[i]) > kSineBudget * u_max * slack) {
        throw DisturbanceBudgetError("disturbance sine_amp[" + std::to_string(i) + "] exceeds 20% of u_max");
      }
      if (3.0 * noise_sigma[i] > kNoiseBudget * u_max * slack) {
        throw DisturbanceBudgetError("disturbance noise_sigma[" + std::to_string(i) +
                                     "]: 3 sigma exceeds 5% of u_max");
      }
    }
  }

  /// Offset plus sinusoid at time t.
  Vec3 deterministic(double t) const {
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = offset[i] + sine_amp[i] * std::sin(sine_freq * t + sine_phase[i]);
    return out;
  }
};

/// Per-axis independent Gaussian streams derived from the spec seed.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) {
    for (std::size_t i = 0; i < engines_.size(); ++i) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(i)};
      engines_[i].seed(seq);
    }
  }

  /// Unit-variance draws, one per axis.
  Vec3 draw() {
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = normal_[i](engines_[i]);
    return out;
  }

 private:
  std::array<std::mt19937_64, 3> engines_;
  std::array<std::normal_distribution<double>, 3> normal_;
};

/// Samples the full disturbance at t, drawing one noise vector.
inline Vec3 disturbance_torque(const DisturbanceSpec& spec, double t, NoiseSource& noise) {
  if (!(t >= 0.0)) throw InvalidParameter("disturbance time must be non-negative");
  return spec.deterministic(t) + spec.noise_sigma.cwiseProduct(noise.draw());
}

}  // namespace agrosim
