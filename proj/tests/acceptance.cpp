// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any selected criterion fails.
//
//   acceptance               all criteria
//   acceptance --criterion 3 one criterion

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "agrosim/agrosim.hpp"
#include "test_helpers.hpp"

using namespace agrosim;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string settle_str(const std::optional<double>& s) { return s ? fmt("%.3f s", *s) : std::string("never"); }

Outcome settling() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"fl-paper", "bs-paper"}) {
    const ScenarioConfig c = preset(name);
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioResult r = run_scenario(c);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& st = r.metrics.settle_time;
    const bool ok = st[0] && st[1] && *st[0] <= 0.30 && *st[1] <= 0.30 && secs < 1.0;
    pass = pass && ok;
    detail += fmt("%s roll %s pitch %s runtime %.4f s; ", name, settle_str(st[0]).c_str(), settle_str(st[1]).c_str(), secs);
  }
  return {pass, detail + "need <= 0.300 s"};
}

Outcome saturation() {
  double worst = 0.0;
  std::size_t violations = 0;
  for (const char* name : {"fl-paper", "bs-paper"}) {
    const ScenarioConfig c = preset(name);
    for (const auto& s : run_scenario(c).record.samples) {
      for (int i = 0; i < 3; ++i) {
        const double u = std::abs(s.u_sat.tau[i]);
        worst = std::max(worst, u);
        if (!(u <= paper_values::kTorqueLimit)) ++violations;
      }
    }
  }
  return {violations == 0, fmt("max |u| %.6f N m, limit %.4f, violations %zu", worst, paper_values::kTorqueLimit, violations)};
}

Outcome fl_exactness() {
  std::mt19937_64 rng(2024);
  ScenarioConfig base = preset("fl-paper");
  base.saturation = false;
  base.disturbance.reset();
  base.hold = ControlHold::Stage;
  const auto& g = std::get<FlGains>(base.gains);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    ScenarioConfig c = base;
    c.initial.attitude = deg_to_rad(testing::random_vec(rng, -45, 45));
    c.initial.rate = testing::random_vec(rng, -2, 2);
    for (const auto& s : run_scenario(c).record.samples) {
      for (int i = 0; i < 3; ++i) {
        const double e = testing::second_order_error(-c.initial.attitude[i], -c.initial.rate[i], g.k1[i], g.k2[i], s.t);
        worst = std::max(worst, std::abs(-s.state.attitude[i] - e));
      }
    }
  }
  return {worst < 1e-6, fmt("10 random starts, max |e - e_analytic| %.3g rad, need < 1e-6", worst)};
}

double max_v2_increase(const ScenarioConfig& c) {
  const auto rec = run_scenario(c).record;
  double worst = -INFINITY;
  for (std::size_t k = 1; k < rec.samples.size(); ++k) {
    worst = std::max(worst, rec.samples[k].lyapunov.v2 - rec.samples[k - 1].lyapunov.v2);
  }
  return worst;
}

Outcome lyapunov() {
  ScenarioConfig c = preset("bs-paper");
  c.disturbance.reset();
  c.adaptation = false;
  c.saturation = false;
  const double unsat = max_v2_increase(c);
  c.saturation = true;
  const double sat = max_v2_increase(c);
  return {unsat <= 1e-9,
          fmt("max V2 step change %.3g (unsaturated), need <= 1e-9; with torque limit active %.3g (not assessed)", unsat,
              sat)};
}

Outcome adaptive_tracking() {
  const ScenarioConfig c = preset("bs-adaptive-paper");
  const ScenarioResult r = run_scenario(c);
  double max_att = 0.0;
  for (const auto& s : r.record.samples) {
    if (s.t >= 0.5) max_att = std::max(max_att, s.state.attitude.cwiseAbs().maxCoeff());
  }
  const double rms = estimate_error_rms(r.record, 0.7, 1.2);
  const double peak = r.metrics.disturbance_peak;
  const double max_deg = rad_to_deg(max_att);
  return {max_deg <= 2.0 && rms < 0.15 * peak,
          fmt("max |attitude| after 0.5 s %.3f deg (<= 2), estimate rms %.4f vs peak %.4f = %.1f%% (< 15%%)", max_deg,
              rms, peak, 100.0 * rms / peak)};
}

Outcome constant_disturbance() {
  ScenarioConfig c = preset("bs-adaptive-paper");
  c.disturbance = DisturbanceSpec::constant(Vec3(0.15, -0.15, 0.05) * c.u_max);
  c.adaptation = true;
  c.horizon = 1.5;
  const auto rec = run_scenario(c).record;
  const auto& last = rec.samples.back();
  const double rel = (last.l_true - last.l_hat).norm() / last.l_true.norm();
  return {rel < 0.02, fmt("||L - Lhat|| / ||L|| at t = %.3f s is %.3g, need < 0.02", last.t, rel)};
}

double allocation_round_trip() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  double worst = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const SteeringConfig s{angle(rng), angle(rng)};
    if (s.is_singular(1e-3)) continue;
    const Vec3 tau = testing::random_vec(rng, -40, 40);
    const WheelTorque w = allocate_wheel_torques(BodyTorque{tau}, s);
    const double s1 = std::sin(s.delta1), c1 = std::cos(s.delta1), s2 = std::sin(s.delta2), c2 = std::cos(s.delta2);
    const Vec3 back(2 * s1 * w.tau1 - 2 * s2 * w.tau2, -2 * c1 * w.tau1 + 2 * c2 * w.tau2, 4 * w.tau_delta);
    worst = std::max(worst, (back - tau).norm() / std::max(1.0, tau.norm()));
  }
  return worst;
}

double riccati_residual() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(0.01, 100.0);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const double qp = w(rng), qv = (k % 5 == 0) ? 0.0 : w(rng), r = w(rng);
    const PdGains g = lqr_double_integrator(qp, qv, r);
    Eigen::Matrix2d a, p, q;
    a << 0, 1, 0, 0;
    const Eigen::Vector2d b(0, 1);
    p << r * g.k1 * g.k2, r * g.k2, r * g.k2, r * g.k1;
    q << qp, 0, 0, qv;
    const Eigen::Matrix2d res = a.transpose() * p + p * a - p * b * b.transpose() * p / r + q;
    worst = std::max(worst, res.cwiseAbs().maxCoeff() / std::max(1.0, q.cwiseAbs().maxCoeff()));
  }
  return worst;
}

double rk4_slope() {
  ScenarioConfig c = preset("fl-paper");
  c.saturation = false;
  c.hold = ControlHold::Stage;
  c.initial.rate = Vec3(1.0, -1.5, 2.0);
  ScenarioConfig fine_cfg = c;
  fine_cfg.dt = 1e-5;
  const auto fine = run_scenario(fine_cfg).record;
  const auto error_at = [&](double dt) {
    ScenarioConfig k = c;
    k.dt = dt;
    const auto coarse = run_scenario(k).record;
    const auto stride = static_cast<std::size_t>(std::llround(dt / fine_cfg.dt));
    double worst = 0.0;
    for (std::size_t i = 0; i < coarse.samples.size(); ++i) {
      worst = std::max(worst,
                       (coarse.samples[i].state.attitude - fine.samples[i * stride].state.attitude).cwiseAbs().maxCoeff());
    }
    return worst;
  };
  return std::log2(error_at(2e-3) / error_at(1e-3));
}

bool equilibrium_exact() {
  for (const auto& name : preset_names()) {
    ScenarioConfig c = preset(name);
    c.initial = {};
    c.disturbance.reset();
    for (const auto& s : run_scenario(c).record.samples) {
      if (s.state.attitude != Vec3::Zero() || s.state.rate != Vec3::Zero() || s.u_sat.tau != Vec3::Zero() ||
          s.l_hat != Vec3::Zero())
        return false;
    }
  }
  return true;
}

Outcome oracles() {
  const double alloc = allocation_round_trip();
  const double ric = riccati_residual();
  const double slope = rk4_slope();
  const bool eq = equilibrium_exact();
  return {alloc <= 1e-9 && ric <= 1e-9 && slope >= 3.5 && eq,
          fmt("allocation %.3g (<= 1e-9), Riccati %.3g (<= 1e-9), RK4 slope %.3f (>= 3.5), equilibrium %s", alloc, ric,
              slope, eq ? "exact" : "NOT exact")};
}

Outcome determinism() {
  const auto csv = [] {
    std::ostringstream os;
    write_csv(os, run_scenario(preset("bs-adaptive-paper")).record);
    return os.str();
  };
  const std::string a = csv();
  const std::string b = csv();
  return {a == b && !a.empty(), fmt("two runs of bs-adaptive-paper, %zu bytes each, %s", a.size(),
                                    a == b ? "identical" : "DIFFERENT")};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "settling within 0.30 s", settling},
      {2, "torque limit respected", saturation},
      {3, "feedback linearization exactness", fl_exactness},
      {4, "backstepping Lyapunov descent", lyapunov},
      {5, "adaptive tracking under disturbance", adaptive_tracking},
      {6, "constant disturbance estimate convergence", constant_disturbance},
      {7, "oracle equivalences", oracles},
      {8, "byte-identical CSV", determinism},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }
  int failures = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str());
    if (!o.pass) ++failures;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no such criterion: %d\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
