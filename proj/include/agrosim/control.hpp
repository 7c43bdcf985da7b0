#pragma once

/**
 * Attitude controllers producing unsaturated body torques.
 *
 * PD + feedback linearization cancels the Coriolis drift and imposes
 *     edd + k1 ed + k2 e = 0      per axis, e = x_d - x.
 *
 * Adaptive backstepping uses the rate as a virtual control:
 *     e1  = x_d - x
 *     U_v = xd_d + K1 e1                      (stabilizing function)
 *     e2  = U_v - xd
 *     U_B = g^-1 (Lambda^-1 Gamma e1 - f - L_hat + xdd_d + K1 e1d + K2 e2)
 *     L_hatd = -Sigma^-1 Lambda e2
 * which yields V2d = -e1' Gamma K1 e1 - e2' Lambda K2 e2 for the composite
 *     V2 = 1/2 e1' Gamma e1 + 1/2 e2' Lambda e2 + 1/2 L~' Sigma L~.
 *
 * Diagonal gain matrices are stored as 3-vectors.
 */

#include <cmath>
#include <string>

#include "agrosim/dynamics.hpp"
#include "agrosim/errors.hpp"
#include "agrosim/types.hpp"

namespace agrosim {

namespace detail {
inline void require_positive(const Vec3& v, const char* name) {
  if (!v.allFinite() || !(v.array() > 0.0).all()) {
    throw InvalidParameter(std::string("gain ") + name + " must have strictly positive entries");
  }
}
}  // namespace detail

/// Per-axis PD gains: k1 on the rate error, k2 on the angle error.
struct FlGains {
  Vec3 k1 = Vec3::Ones();
  Vec3 k2 = Vec3::Ones();

  void validate() const {
    detail::require_positive(k1, "k1");
    detail::require_positive(k2, "k2");
  }
};

struct BsGains {
  Vec3 k1 = Vec3::Ones();
  Vec3 k2 = Vec3::Ones();
  Vec3 gamma = Vec3::Ones();
  Vec3 lambda = Vec3::Ones();
  Vec3 sigma = Vec3::Ones();

  void validate() const {
    detail::require_positive(k1, "K1");
    detail::require_positive(k2, "K2");
    detail::require_positive(gamma, "Gamma");
    detail::require_positive(lambda, "Lambda");
    detail::require_positive(sigma, "Sigma");
  }
};

/// Desired attitude trajectory sample.
struct Reference {
  Vec3 attitude = Vec3::Zero();
  Vec3 rate = Vec3::Zero();
  Vec3 accel = Vec3::Zero();

  static constexpr double kDefaultBound = 100.0;

  double bound_measure() const {
    return attitude.squaredNorm() + rate.squaredNorm() + accel.squaredNorm();
  }

  void validate(double rho = kDefaultBound) const {
    if (!attitude.allFinite() || !rate.allFinite() || !accel.allFinite()) {
      throw InvalidParameter("reference must be finite");
    }
    if (!(rho > 0.0)) throw InvalidParameter("reference bound rho must be positive");
    if (bound_measure() > rho) {
      throw InvalidParameter("reference exceeds bound |x_d|^2 + |xd_d|^2 + |xdd_d|^2 <= rho");
    }
  }
};

/// Disturbance estimate L_hat (rad/s^2).
struct AdaptState {
  Vec3 l_hat = Vec3::Zero();
};

struct LyapunovSample {
  double v1 = 0.0;
  double v2 = 0.0;
  Vec3 e1 = Vec3::Zero();
  Vec3 e2 = Vec3::Zero();
};

inline BodyTorque fl_control(const BodyState& state, const Reference& ref, const FlGains& gains,
                             const EffectiveInertias& eff) {
  const Vec3 e = ref.attitude - state.attitude;
  const Vec3 e_dot = ref.rate - state.rate;
  const Vec3 v = ref.accel + gains.k1.cwiseProduct(e_dot) + gains.k2.cwiseProduct(e);
  return {eff.primary.cwiseProduct(v - drift(state.rate, eff))};
}

struct BsErrors {
  Vec3 e1 = Vec3::Zero();
  Vec3 e1_dot = Vec3::Zero();
  Vec3 e2 = Vec3::Zero();
};

inline Vec3 bs_virtual_control(const Reference& ref, const Vec3& e1, const BsGains& gains) {
  return ref.rate + gains.k1.cwiseProduct(e1);
}

inline BsErrors bs_errors(const BodyState& state, const Reference& ref, const BsGains& gains) {
  BsErrors e;
  e.e1 = ref.attitude - state.attitude;
  e.e1_dot = ref.rate - state.rate;
  e.e2 = bs_virtual_control(ref, e.e1, gains) - state.rate;
  return e;
}

inline BodyTorque bs_control(const BodyState& state, const Reference& ref, const BsGains& gains,
                             const EffectiveInertias& eff, const AdaptState& adapt) {
  const BsErrors e = bs_errors(state, ref, gains);
  const Vec3 inner = gains.gamma.cwiseQuotient(gains.lambda).cwiseProduct(e.e1) - drift(state.rate, eff) -
                     adapt.l_hat + ref.accel + gains.k1.cwiseProduct(e.e1_dot) + gains.k2.cwiseProduct(e.e2);
  return {eff.primary.cwiseProduct(inner)};
}

/// Right-hand side of the adaptation law.
inline Vec3 adaptation_rate(const Vec3& e2, const BsGains& gains) {
  return -gains.lambda.cwiseProduct(e2).cwiseQuotient(gains.sigma);
}

/// One integration step of the adaptation law with e2 held over the step.
/// RK4 on a constant right-hand side collapses to a single increment.
inline AdaptState adapt_update(const AdaptState& adapt, const Vec3& e2, const BsGains& gains, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("adaptation step dt must be positive");
  if (!(gains.sigma.array() > 0.0).all()) throw InvalidParameter("Sigma must have strictly positive entries");
  return {adapt.l_hat + dt * adaptation_rate(e2, gains)};
}

/// V1, V2 along a trajectory. `l_true` is the acceleration-domain disturbance,
/// known only in simulation.
inline LyapunovSample lyapunov_sample(const BodyState& state, const Reference& ref, const BsGains& gains,
                                      const AdaptState& adapt, const Vec3& l_true) {
  const BsErrors e = bs_errors(state, ref, gains);
  const Vec3 l_tilde = l_true - adapt.l_hat;
  LyapunovSample s;
  s.e1 = e.e1;
  s.e2 = e.e2;
  s.v1 = 0.5 * e.e1.squaredNorm();
  s.v2 = 0.5 * e.e1.dot(gains.gamma.cwiseProduct(e.e1)) + 0.5 * e.e2.dot(gains.lambda.cwiseProduct(e.e2)) +
         0.5 * l_tilde.dot(gains.sigma.cwiseProduct(l_tilde));
  return s;
}

struct PdGains {
  double k2 = 0.0;  // position (1/s^2)
  double k1 = 0.0;  // velocity (1/s)
};

/// Continuous-time LQR for a single-axis double integrator edd = v with cost
/// integral of q_pos e^2 + q_vel ed^2 + r v^2. Closed form of the Riccati
/// solution; the resulting error dynamics are always Hurwitz.
inline PdGains lqr_double_integrator(double q_pos, double q_vel, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidParameter("LQR input weight r must be positive");
  if (!(q_pos > 0.0) || !std::isfinite(q_pos)) throw InvalidParameter("LQR position weight must be positive");
  if (!(q_vel >= 0.0) || !std::isfinite(q_vel)) throw InvalidParameter("LQR velocity weight must be non-negative");
  PdGains g;
  g.k2 = std::sqrt(q_pos / r);
  g.k1 = std::sqrt((q_vel + 2.0 * std::sqrt(q_pos * r)) / r);
  return g;
}

}  // namespace agrosim
