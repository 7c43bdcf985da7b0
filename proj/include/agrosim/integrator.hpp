#pragma once

#include <utility>

namespace agrosim {

/// Classical fourth-order Runge-Kutta step for y' = f(t, y).
/// `State` needs vector-space operators (Eigen vectors work).
template <class State, class Rhs>
State rk4_step(const State& y, double t, double dt, Rhs&& f) {
  const double half = 0.5 * dt;
  const State k1 = f(t, y);
  const State k2 = f(t + half, State(y + half * k1));
  const State k3 = f(t + half, State(y + half * k2));
  const State k4 = f(t + dt, State(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace agrosim
