#pragma once

/**
 * Closed-loop rollout: controller -> saturation -> wheel allocation -> plant
 * plus disturbance -> RK4.
 *
 * The augmented state is [attitude, rate, L_hat] (9 values). The estimate is
 * only integrated when adaptation is enabled. Control and the disturbance
 * sample are held over each step by default, emulating a controller running
 * at the integration rate; `ControlHold::Stage` re-evaluates the controller
 * and the deterministic disturbance at every RK4 stage instead, which makes
 * the loop a continuous-time ODE (noise stays held per step either way).
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "agrosim/control.hpp"
#include "agrosim/disturbance.hpp"
#include "agrosim/dynamics.hpp"
#include "agrosim/errors.hpp"
#include "agrosim/integrator.hpp"
#include "agrosim/types.hpp"

namespace agrosim {

enum class ControllerKind { FeedbackLinearization, Backstepping };
enum class ControlHold { Step, Stage };

using ControllerGains = std::variant<FlGains, BsGains>;

struct ScenarioConfig {
  std::string name = "scenario";
  InertiaSet inertias;
  SteeringConfig steering;
  BodyState initial;
  Reference reference;
  double reference_bound = Reference::kDefaultBound;
  ControllerGains gains = FlGains{};
  double u_max = 1.0;
  bool saturation = true;
  double dt = 1e-3;
  double horizon = 1.5;
  ControlHold hold = ControlHold::Step;
  std::optional<DisturbanceSpec> disturbance;
  bool adaptation = false;
  Vec3 adapt_initial = Vec3::Zero();
  double settle_band = deg_to_rad(2.0);
  std::array<double, 2> estimate_window{0.7, 1.2};

  ControllerKind controller() const {
    return std::holds_alternative<FlGains>(gains) ? ControllerKind::FeedbackLinearization
                                                  : ControllerKind::Backstepping;
  }

  std::size_t steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be positive");
    if (!(horizon >= dt) || !std::isfinite(horizon)) throw InvalidParameter("horizon must be at least dt");
    if (!(u_max > 0.0) || !std::isfinite(u_max)) throw InvalidParameter("u_max must be positive");
    if (!(settle_band > 0.0)) throw InvalidParameter("settle band must be positive");
    if (!initial.finite()) throw InvalidParameter("initial state must be finite");
    if (!adapt_initial.allFinite()) throw InvalidParameter("initial disturbance estimate must be finite");
    validate_inertias();
    reference.validate(reference_bound);
    std::visit([](const auto& g) { g.validate(); }, gains);
    if (disturbance) disturbance->validate(u_max);
    if (adaptation && controller() != ControllerKind::Backstepping) {
      throw InvalidParameter("adaptation requires the backstepping controller");
    }
  }

 private:
  void validate_inertias() const { agrosim::validate(inertias, steering); }
};

/// Augmented simulation state.
struct AugState {
  BodyState body;
  AdaptState adapt;
};

using AugVector = Eigen::Matrix<double, 9, 1>;

inline AugVector pack(const AugState& s) {
  AugVector v;
  v << s.body.attitude, s.body.rate, s.adapt.l_hat;
  return v;
}

inline AugState unpack(const AugVector& v) {
  return {{v.segment<3>(0), v.segment<3>(3)}, {v.segment<3>(6)}};
}

/// Per-axis clamp to [-u_max, u_max].
inline BodyTorque saturate(const BodyTorque& u, double u_max) {
  if (!(u_max > 0.0)) throw InvalidParameter("u_max must be positive");
  return {u.tau.cwiseMax(-u_max).cwiseMin(u_max)};
}

/// Plant, controller and limits of one validated scenario.
class ClosedLoop {
 public:
  explicit ClosedLoop(ScenarioConfig config) : config_(std::move(config)) {
    config_.validate();
    eff_ = effective_inertias(config_.inertias, config_.steering);
  }

  const ScenarioConfig& config() const { return config_; }
  const EffectiveInertias& inertias() const { return eff_; }

  /// Unsaturated controller output.
  BodyTorque command(const AugState& s) const {
    if (const auto* fl = std::get_if<FlGains>(&config_.gains)) {
      return fl_control(s.body, config_.reference, *fl, eff_);
    }
    return bs_control(s.body, config_.reference, std::get<BsGains>(config_.gains), eff_, s.adapt);
  }

  BodyTorque limit(const BodyTorque& u) const { return config_.saturation ? saturate(u, config_.u_max) : u; }

  /// Deterministic part of the disturbance torque at t.
  Vec3 disturbance_at(double t) const {
    return config_.disturbance ? config_.disturbance->deterministic(t) : Vec3::Zero();
  }

  /// Acceleration-domain image g(x) tau of a disturbance torque.
  Vec3 lumped(const Vec3& tau_dist) const { return input_gain(eff_).cwiseProduct(tau_dist); }

  AugVector derivative(const AugVector& y, const BodyTorque& applied, const Vec3& tau_dist) const {
    const AugState s = unpack(y);
    AugVector dy;
    dy.segment<3>(0) = s.body.rate;
    dy.segment<3>(3) = angular_acceleration(s.body, BodyTorque{applied.tau + tau_dist}, eff_);
    if (config_.adaptation) {
      const auto& gains = std::get<BsGains>(config_.gains);
      dy.segment<3>(6) = adaptation_rate(bs_errors(s.body, config_.reference, gains).e2, gains);
    } else {
      dy.segment<3>(6).setZero();
    }
    return dy;
  }

 private:
  ScenarioConfig config_;
  EffectiveInertias eff_;
};

/// Advances the augmented state by one step of the scenario's dt.
/// `noise_torque` is the noise sample of this step (already scaled by sigma).
inline AugState step_rk4(const AugState& state, const ClosedLoop& loop, double t, const Vec3& noise_torque,
                         std::size_t step_index = 0) {
  const double dt = loop.config().dt;
  AugVector next;
  if (loop.config().hold == ControlHold::Step) {
    const BodyTorque applied = loop.limit(loop.command(state));
    const Vec3 tau_dist = loop.disturbance_at(t) + noise_torque;
    next = rk4_step(pack(state), t, dt,
                    [&](double, const AugVector& y) { return loop.derivative(y, applied, tau_dist); });
  } else {
    next = rk4_step(pack(state), t, dt, [&](double ts, const AugVector& y) {
      const BodyTorque applied = loop.limit(loop.command(unpack(y)));
      return loop.derivative(y, applied, loop.disturbance_at(ts) + noise_torque);
    });
  }
  if (!next.allFinite()) throw DivergenceError(step_index);
  return unpack(next);
}

struct TrajectorySample {
  double t = 0.0;
  BodyState state;
  BodyTorque u_cmd;
  BodyTorque u_sat;
  WheelTorque wheel;
  Vec3 tau_dist = Vec3::Zero();  // N m
  Vec3 l_true = Vec3::Zero();    // rad/s^2
  Vec3 l_hat = Vec3::Zero();
  LyapunovSample lyapunov;
};

struct TrajectoryRecord {
  double dt = 0.0;
  Vec3 reference_attitude = Vec3::Zero();
  std::vector<TrajectorySample> samples;
};

struct Metrics {
  std::array<std::optional<double>, 3> settle_time;  // s; empty if never settled
  Vec3 peak_torque = Vec3::Zero();                   // max |u_sat| per axis
  std::optional<double> est_error_rms;               // rad/s^2
  Vec3 final_error = Vec3::Zero();                   // rad
  double disturbance_peak = 0.0;                     // max |L_true|, rad/s^2
};

/// Earliest time after which |x_d - x| stays within `band` on each axis.
inline std::array<std::optional<double>, 3> settle_time(const TrajectoryRecord& record, double band) {
  if (!(band > 0.0)) throw InvalidParameter("settling band must be positive");
  std::array<std::optional<double>, 3> out;
  for (int axis = 0; axis < 3; ++axis) {
    std::optional<double> entered;
    for (const auto& s : record.samples) {
      const double err = std::abs(record.reference_attitude[axis] - s.state.attitude[axis]);
      if (err > band) {
        entered.reset();
      } else if (!entered) {
        entered = s.t;
      }
    }
    out[axis] = entered;
  }
  return out;
}

/// RMS of |L_true - L_hat| over samples with t0 <= t <= t1.
inline double estimate_error_rms(const TrajectoryRecord& record, double t0, double t1) {
  if (!(t0 < t1)) throw InvalidWindow("estimate window requires t0 < t1");
  constexpr double kTimeSlack = 1e-9;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : record.samples) {
    if (s.t >= t0 - kTimeSlack && s.t <= t1 + kTimeSlack) {
      sum += (s.l_true - s.l_hat).squaredNorm();
      ++n;
    }
  }
  if (n == 0) throw InvalidWindow("estimate window contains no samples");
  return std::sqrt(sum / static_cast<double>(n));
}

inline Metrics compute_metrics(const TrajectoryRecord& record, const ScenarioConfig& config) {
  Metrics m;
  m.settle_time = settle_time(record, config.settle_band);
  for (const auto& s : record.samples) {
    m.peak_torque = m.peak_torque.cwiseMax(s.u_sat.tau.cwiseAbs());
    m.disturbance_peak = std::max(m.disturbance_peak, s.l_true.norm());
  }
  if (!record.samples.empty()) {
    m.final_error = record.reference_attitude - record.samples.back().state.attitude;
    const double end = record.samples.back().t;
    const double t0 = config.estimate_window[0];
    const double t1 = std::min(config.estimate_window[1], end);
    if (t0 < t1) {
      try {
        m.est_error_rms = estimate_error_rms(record, t0, t1);
      } catch (const InvalidWindow&) {
      }
    }
  }
  return m;
}

struct ScenarioResult {
  TrajectoryRecord record;
  Metrics metrics;
};

inline ScenarioResult run_scenario(const ScenarioConfig& config) {
  const ClosedLoop loop(config);
  const auto& cfg = loop.config();
  const std::size_t n = cfg.steps();

  std::optional<NoiseSource> noise;
  if (cfg.disturbance) noise.emplace(cfg.disturbance->seed);

  // Lyapunov weights: controller gains for backstepping, unit weights otherwise.
  const BsGains lyap_gains = cfg.controller() == ControllerKind::Backstepping ? std::get<BsGains>(cfg.gains) : BsGains{};
  const bool lyap_v2 = cfg.controller() == ControllerKind::Backstepping;

  ScenarioResult result;
  auto& rec = result.record;
  rec.dt = cfg.dt;
  rec.reference_attitude = cfg.reference.attitude;
  rec.samples.reserve(n + 1);

  AugState state{cfg.initial, {cfg.adapt_initial}};
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const Vec3 noise_torque =
        noise ? Vec3(cfg.disturbance->noise_sigma.cwiseProduct(noise->draw())) : Vec3(Vec3::Zero());

    TrajectorySample s;
    s.t = t;
    s.state = state.body;
    s.u_cmd = loop.command(state);
    s.u_sat = loop.limit(s.u_cmd);
    s.wheel = allocate_wheel_torques(s.u_sat, cfg.steering);
    s.tau_dist = loop.disturbance_at(t) + noise_torque;
    s.l_true = loop.lumped(s.tau_dist);
    s.l_hat = state.adapt.l_hat;
    s.lyapunov = lyapunov_sample(state.body, cfg.reference, lyap_gains, state.adapt, s.l_true);
    if (!lyap_v2) s.lyapunov.v2 = std::nan("");
    rec.samples.push_back(s);

    if (k < n) state = step_rk4(state, loop, t, noise_torque, k);
  }
  result.metrics = compute_metrics(rec, cfg);
  return result;
}

}  // namespace agrosim
