#pragma once

#include <Eigen/Dense>
#include <numbers>

namespace agrosim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

inline Vec3 deg_to_rad(const Vec3& deg) {
  return {deg_to_rad(deg.x()), deg_to_rad(deg.y()), deg_to_rad(deg.z())};
}
inline Vec3 rad_to_deg(const Vec3& rad) {
  return {rad_to_deg(rad.x()), rad_to_deg(rad.y()), rad_to_deg(rad.z())};
}

inline bool all_finite(const Vec3& v) { return v.allFinite(); }

}  // namespace agrosim
