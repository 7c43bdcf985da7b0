#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "agrosim/sim.hpp"

namespace agrosim {

inline constexpr const char* kCsvHeader =
    "t,phi,theta,psi,phi_dot,theta_dot,psi_dot,u1_cmd,u2_cmd,u3_cmd,u1_sat,u2_sat,u3_sat,"
    "tau1,tau2,tau_delta,L1,L2,L3,Lhat1,Lhat2,Lhat3,V1,V2";

/// 17 significant digits reproduce any double exactly.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// One row per sample. Angles in degrees, rates in deg/s, torques in N m,
/// disturbance and estimate in rad/s^2.
inline void write_csv(std::ostream& os, const TrajectoryRecord& record) {
  os << kCsvHeader << '\n';
  for (const auto& s : record.samples) {
    std::string row = format_double(s.t);
    const auto put = [&row](double v) {
      row += ',';
      row += format_double(v);
    };
    const auto put3 = [&put](const Vec3& v) {
      put(v.x());
      put(v.y());
      put(v.z());
    };
    put3(rad_to_deg(s.state.attitude));
    put3(rad_to_deg(s.state.rate));
    put3(s.u_cmd.tau);
    put3(s.u_sat.tau);
    put(s.wheel.tau1);
    put(s.wheel.tau2);
    put(s.wheel.tau_delta);
    put3(s.l_true);
    put3(s.l_hat);
    put(s.lyapunov.v1);
    put(s.lyapunov.v2);
    os << row << '\n';
  }
}

}  // namespace agrosim
