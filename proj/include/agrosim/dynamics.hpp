#pragma once

/**
 * Airborne attitude dynamics of a four-wheel independent drive and steering
 * (4WIDS) robot with frozen steering.
 *
 * The body is driven by the reaction torques of its four hub motors. With
 * cross-symmetric steering (delta1 = delta3, delta2 = delta4) and
 * cross-symmetric drive torques (tau1 = -tau3, tau2 = -tau4) the rigid-body
 * equations reduce to
 *
 *     xdd = f(x, xd) + g(x) u,
 *
 *     f = [ J_phi2/J_phi1 * thetad*psid,
 *           J_theta2/J_theta1 * phid*psid,
 *           J_psi2/J_psi1 * phid*thetad ],      g = diag(1/J_phi1, 1/J_theta1, 1/J_psi1),
 *
 * with u = [tau_x, tau_y, tau_z] the body torque and Euler-angle rates
 * identified with body rates (small-angle regulation).
 */

#include <cmath>
#include <optional>

#include "agrosim/errors.hpp"
#include "agrosim/types.hpp"

namespace agrosim {

/// Frozen steering angles (rad). Wheels 3 and 4 mirror wheels 1 and 2.
struct SteeringConfig {
  double delta1 = 0.0;
  double delta2 = 0.0;

  static constexpr double kSingularityTolerance = 1e-6;

  /// |sin(delta1 - delta2)| scales the determinant of the roll/pitch block
  /// of the torque Jacobian.
  bool is_singular(double tolerance = kSingularityTolerance) const {
    return std::abs(std::sin(delta1 - delta2)) < tolerance;
  }

  static SteeringConfig from_degrees(double d1, double d2) {
    return {deg_to_rad(d1), deg_to_rad(d2)};
  }
};

/// Wheel placement used to derive the reflected inertias.
struct WheelGeometry {
  double a = 0.0;    // m
  double b = 0.0;    // m
  double c = 0.0;    // m, steering-axis offset of the wheel
  double m_w = 0.0;  // kg, mass of one wheel module
};

struct ReflectedInertia {
  double xx = 0.0;
  double yy = 0.0;
};

/// Inertia of the base reflected by the offset wheel masses.
///
/// The yy term mixes a/2 and b/2 exactly as published; compare the symmetric
/// form of the xx term.
inline ReflectedInertia reflected_inertia(const WheelGeometry& g, const SteeringConfig& s) {
  if (!(g.m_w > 0.0) || !std::isfinite(g.m_w)) {
    throw InvalidParameter("wheel mass m_W must be positive");
  }
  if (!(g.a >= 0.0) || !(g.b >= 0.0) || !(g.c >= 0.0)) {
    throw InvalidParameter("wheel geometry a, b, c must be non-negative");
  }
  const auto sq = [](double v) { return v * v; };
  ReflectedInertia out;
  out.xx = 2.0 * g.m_w * (sq(g.b / 2.0 + g.c * std::cos(s.delta1)) + sq(g.b / 2.0 + g.c * std::cos(s.delta2)));
  out.yy = 2.0 * g.m_w * (sq(g.a / 2.0 + g.c * std::sin(s.delta1)) + sq(g.b / 2.0 + g.c * std::sin(s.delta2)));
  return out;
}

/// Principal inertias (kg m^2) of body, wheel, and the wheel-mass reflection.
struct InertiaSet {
  Vec3 body = Vec3::Zero();       // J_Bxx, J_Byy, J_Bzz
  Vec3 wheel = Vec3::Zero();      // J_Wxx, J_Wyy, J_Wzz
  Vec3 reflected = Vec3::Zero();  // J_mWxx, J_mWyy, J_mWzz
  std::optional<WheelGeometry> geometry;

  /// Builds the set with J_mWxx, J_mWyy computed from geometry at the given steering.
  static InertiaSet from_geometry(const Vec3& body, const Vec3& wheel, double reflected_zz,
                                  const WheelGeometry& geometry, const SteeringConfig& steering) {
    const auto r = reflected_inertia(geometry, steering);
    return InertiaSet{body, wheel, Vec3(r.xx, r.yy, reflected_zz), geometry};
  }
};

/// Throws InvalidParameter if any entry is non-positive or if the stored
/// reflected inertias disagree with the geometry (1e-9 relative).
inline void validate(const InertiaSet& in, const SteeringConfig& steering) {
  if (!std::isfinite(steering.delta1) || !std::isfinite(steering.delta2)) {
    throw InvalidParameter("steering angles must be finite");
  }
  const auto positive = [](const Vec3& v) { return v.allFinite() && (v.array() > 0.0).all(); };
  if (!positive(in.body)) throw InvalidParameter("body inertias J_B must be strictly positive");
  if (!positive(in.wheel)) throw InvalidParameter("wheel inertias J_W must be strictly positive");
  if (!positive(in.reflected)) throw InvalidParameter("reflected inertias J_mW must be strictly positive");
  if (in.geometry) {
    const auto r = reflected_inertia(*in.geometry, steering);
    const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
    if (!close(r.xx, in.reflected.x()) || !close(r.yy, in.reflected.y())) {
      throw InvalidParameter("reflected inertias J_mWxx/J_mWyy are inconsistent with the wheel geometry");
    }
  }
}

/// Lumped inertial constants of the simplified equations of motion.
/// `primary` holds the divisors (J_phi1, J_theta1, J_psi1), `coupling` the
/// Coriolis coefficients (J_phi2, J_theta2, J_psi2).
struct EffectiveInertias {
  Vec3 primary = Vec3::Ones();
  Vec3 coupling = Vec3::Zero();
};

inline EffectiveInertias effective_inertias(const InertiaSet& in, const SteeringConfig& s) {
  validate(in, s);
  const double jbxx = in.body.x(), jbyy = in.body.y(), jbzz = in.body.z();
  const double jwxx = in.wheel.x();
  const double jmxx = in.reflected.x(), jmyy = in.reflected.y();

  EffectiveInertias eff;
  eff.primary = Vec3(jbxx + jmxx + 2.0 * jwxx * (std::cos(s.delta1) + std::cos(s.delta2)),
                     jbyy + jmyy + 2.0 * jwxx * (std::sin(s.delta1) + std::sin(s.delta2)),
                     jbzz);
  eff.coupling = Vec3(jbyy - jbzz - jmxx, -jbxx + jbzz - jmyy, jbxx - jbyy);
  if (!((eff.primary.array() > 0.0).all())) {
    throw DegenerateInertia("effective inertia J_1 has a non-positive entry for this steering configuration");
  }
  return eff;
}

struct BodyState {
  Vec3 attitude = Vec3::Zero();  // roll, pitch, yaw (rad)
  Vec3 rate = Vec3::Zero();      // rad/s

  bool finite() const { return attitude.allFinite() && rate.allFinite(); }
};

/// Torque about the body axes, N m.
struct BodyTorque {
  Vec3 tau = Vec3::Zero();
};

/// Drive torques of wheel pairs (1/3) and (2/4) plus the steering-joint torque.
struct WheelTorque {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau_delta = 0.0;

  Vec3 as_vector() const { return {tau1, tau2, tau_delta}; }
};

/// Coriolis drift f(x, xd).
inline Vec3 drift(const Vec3& rate, const EffectiveInertias& eff) {
  const Vec3 products(rate.y() * rate.z(), rate.x() * rate.z(), rate.x() * rate.y());
  return eff.coupling.cwiseQuotient(eff.primary).cwiseProduct(products);
}

/// Diagonal of the input map g(x); state-independent for frozen steering.
inline Vec3 input_gain(const EffectiveInertias& eff) { return eff.primary.cwiseInverse(); }

/// Angular acceleration [phidd, thetadd, psidd].
inline Vec3 angular_acceleration(const BodyState& state, const BodyTorque& torque, const EffectiveInertias& eff) {
  const Vec3 products(state.rate.y() * state.rate.z(), state.rate.x() * state.rate.z(),
                      state.rate.x() * state.rate.y());
  return (eff.coupling.cwiseProduct(products) + torque.tau).cwiseQuotient(eff.primary);
}

/// Maps (tau1, tau2, tau_delta) to body torque.
inline Mat3 torque_jacobian(const SteeringConfig& s) {
  Mat3 j;
  // clang-format off
  j <<  2.0 * std::sin(s.delta1), -2.0 * std::sin(s.delta2), 0.0,
       -2.0 * std::cos(s.delta1),  2.0 * std::cos(s.delta2), 0.0,
        0.0,                       0.0,                      4.0;
  // clang-format on
  return j;
}

inline BodyTorque body_torque(const WheelTorque& w, const SteeringConfig& s) {
  return {torque_jacobian(s) * w.as_vector()};
}

/// Inverts the torque Jacobian. A singular steering configuration can only
/// realize pure yaw torque; anything with a roll or pitch component throws.
inline WheelTorque allocate_wheel_torques(const BodyTorque& body, const SteeringConfig& s,
                                          double tolerance = SteeringConfig::kSingularityTolerance) {
  const double tx = body.tau.x();
  const double ty = body.tau.y();
  WheelTorque out;
  out.tau_delta = body.tau.z() / 4.0;
  if (s.is_singular(tolerance)) {
    if (tx != 0.0 || ty != 0.0) throw AllocationSingularity(s.delta1, s.delta2);
    return out;
  }
  const double det = 4.0 * std::sin(s.delta1 - s.delta2);
  out.tau1 = (2.0 * std::cos(s.delta2) * tx + 2.0 * std::sin(s.delta2) * ty) / det;
  out.tau2 = (2.0 * std::cos(s.delta1) * tx + 2.0 * std::sin(s.delta1) * ty) / det;
  return out;
}

}  // namespace agrosim
