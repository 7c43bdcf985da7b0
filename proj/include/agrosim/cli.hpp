#pragma once

/**
 * Scenario runner commands behind the `agrosim` executable: single runs,
 * two-scenario comparisons and one-gain sweeps. Commands return a process
 * exit status and report errors on the given stream.
 */

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "agrosim/config.hpp"
#include "agrosim/csv.hpp"
#include "agrosim/errors.hpp"
#include "agrosim/presets.hpp"
#include "agrosim/sim.hpp"
#include "agrosim/svg.hpp"

namespace agrosim::cli {

namespace fs = std::filesystem;

struct EmitFlags {
  bool csv = true;
  bool svg = true;
  bool metrics = true;
};

struct RunManifest {
  std::string name;  // defaults to the scenario name
  std::optional<std::string> preset;
  std::optional<fs::path> config_path;
  fs::path out_dir = ".";
  EmitFlags emit;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;

  /// Loads the scenario source and applies command-line overrides.
  ScenarioConfig resolve() const {
    if (preset.has_value() == config_path.has_value()) {
      throw ConfigError("exactly one scenario source is required: --preset or --config");
    }
    ScenarioConfig c;
    if (preset) {
      c = agrosim::preset(*preset);
    } else {
      std::ifstream in(*config_path);
      if (!in) throw ConfigError("cannot read config file " + config_path->string());
      std::stringstream buf;
      buf << in.rdbuf();
      c = parse_config(buf.str());
      if (c.name == "scenario") c.name = config_path->stem().string();
    }
    if (!name.empty()) c.name = name;
    if (dt) c.dt = *dt;
    if (horizon) c.horizon = *horizon;
    if (seed && c.disturbance) c.disturbance->seed = *seed;
    c.validate();
    return c;
  }
};

/// Default output directory: $AGROSIM_OUT if set, else the working directory.
inline fs::path default_out_dir() {
  if (const char* env = std::getenv("AGROSIM_OUT"); env != nullptr && *env != '\0') return env;
  return ".";
}

inline const char* controller_name(ControllerKind k) {
  return k == ControllerKind::FeedbackLinearization ? "fl" : "backstepping";
}

inline Json metrics_json(const ScenarioConfig& c, const Metrics& m) {
  Json settle = Json::array();
  for (const auto& s : m.settle_time) settle.push_back(s ? Json(*s) : Json(nullptr));
  Json j;
  j["name"] = c.name;
  j["controller"] = controller_name(c.controller());
  j["settle_band_deg"] = rad_to_deg(c.settle_band);
  j["settle_time_s"] = settle;
  j["peak_torque_Nm"] = detail::vec_json(m.peak_torque);
  j["u_max_Nm"] = c.u_max;
  j["est_error_rms"] = m.est_error_rms ? Json(*m.est_error_rms) : Json(nullptr);
  j["estimate_window_s"] = Json::array({c.estimate_window[0], c.estimate_window[1]});
  j["disturbance_peak"] = m.disturbance_peak;
  j["final_error_rad"] = detail::vec_json(m.final_error);
  return j;
}

namespace detail {

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

inline std::vector<double> times(const TrajectoryRecord& r) {
  std::vector<double> t;
  t.reserve(r.samples.size());
  for (const auto& s : r.samples) t.push_back(s.t);
  return t;
}

template <class Get>
std::vector<double> column(const TrajectoryRecord& r, Get get) {
  std::vector<double> v;
  v.reserve(r.samples.size());
  for (const auto& s : r.samples) v.push_back(get(s));
  return v;
}

inline const char* kAxisNames[3] = {"roll", "pitch", "yaw"};

inline std::vector<svg::Panel> run_panels(const ScenarioConfig& c, const TrajectoryRecord& r) {
  const auto t = times(r);
  const auto& colors = svg::palette();
  svg::Panel att{c.name + ": attitude", "time (s)", "angle (deg)", {}};
  svg::Panel tq{c.name + ": applied body torque", "time (s)", "torque (N m)", {}};
  for (int i = 0; i < 3; ++i) {
    att.series.push_back({kAxisNames[i], t, column(r, [i](const auto& s) { return rad_to_deg(s.state.attitude[i]); }),
                          colors[static_cast<std::size_t>(i)]});
    tq.series.push_back({std::string("u") + std::to_string(i + 1), t,
                         column(r, [i](const auto& s) { return s.u_sat.tau[i]; }), colors[static_cast<std::size_t>(i)]});
  }
  std::vector<svg::Panel> panels{att, tq};
  if (c.disturbance || c.adaptation) {
    svg::Panel est{c.name + ": disturbance and estimate", "time (s)", "accel (rad/s^2)", {}};
    for (int i = 0; i < 3; ++i) {
      const auto& col = colors[static_cast<std::size_t>(i)];
      est.series.push_back({std::string("L") + std::to_string(i + 1), t,
                            column(r, [i](const auto& s) { return s.l_true[i]; }), col});
      est.series.push_back({std::string("Lhat") + std::to_string(i + 1), t,
                            column(r, [i](const auto& s) { return s.l_hat[i]; }), col, true});
    }
    panels.push_back(est);
  }
  return panels;
}

inline std::string settle_text(const std::optional<double>& s) {
  if (!s) return "not settled";
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << *s << " s";
  return os.str();
}

}  // namespace detail

/// Runs one scenario and writes `<name>.csv`, `<name>.metrics.json`, `<name>.svg`
/// as requested. Throws on any failure.
inline std::vector<fs::path> run_and_write(const RunManifest& manifest, std::ostream& out) {
  const ScenarioConfig config = manifest.resolve();
  const ScenarioResult result = run_scenario(config);

  fs::create_directories(manifest.out_dir);
  std::vector<fs::path> written;
  const fs::path base = manifest.out_dir / config.name;
  if (manifest.emit.csv) {
    std::ostringstream csv;
    write_csv(csv, result.record);
    written.push_back(fs::path(base.string() + ".csv"));
    detail::write_file(written.back(), csv.str());
  }
  if (manifest.emit.metrics) {
    written.push_back(fs::path(base.string() + ".metrics.json"));
    detail::write_file(written.back(), metrics_json(config, result.metrics).dump(2) + "\n");
  }
  if (manifest.emit.svg) {
    written.push_back(fs::path(base.string() + ".svg"));
    detail::write_file(written.back(), svg::render(detail::run_panels(config, result.record)));
  }

  out << config.name << " (" << controller_name(config.controller()) << ")\n";
  for (int i = 0; i < 3; ++i) {
    out << "  " << std::left << std::setw(6) << detail::kAxisNames[i]
        << " settle=" << detail::settle_text(result.metrics.settle_time[static_cast<std::size_t>(i)])
        << "  peak torque=" << result.metrics.peak_torque[i] << " N m\n";
  }
  if (result.metrics.est_error_rms) out << "  estimate error rms=" << *result.metrics.est_error_rms << '\n';
  for (const auto& p : written) out << "  wrote " << p.string() << '\n';
  return written;
}

inline int cmd_run(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  try {
    run_and_write(manifest, out);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

/// Largest attitude difference (deg) over the common samples of two runs on
/// the same time grid; empty if the grids differ.
inline std::optional<double> max_attitude_difference(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  if (a.dt != b.dt) return std::nullopt;
  const std::size_t n = std::min(a.samples.size(), b.samples.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    worst = std::max(worst, rad_to_deg((a.samples[k].state.attitude - b.samples[k].state.attitude).cwiseAbs().maxCoeff()));
  }
  return worst;
}

inline void require_same_start(const ScenarioConfig& a, const ScenarioConfig& b) {
  const auto same = [](const Vec3& x, const Vec3& y) { return (x - y).cwiseAbs().maxCoeff() <= 1e-12; };
  if (!same(a.initial.attitude, b.initial.attitude) || !same(a.initial.rate, b.initial.rate)) {
    throw ComparisonInvalid("scenarios '" + a.name + "' and '" + b.name + "' start from different initial states");
  }
  if (!same(a.reference.attitude, b.reference.attitude) || !same(a.reference.rate, b.reference.rate) ||
      !same(a.reference.accel, b.reference.accel)) {
    throw ComparisonInvalid("scenarios '" + a.name + "' and '" + b.name + "' track different references");
  }
}

/// Overlaid attitude plot and joint metrics table for two scenarios.
inline std::vector<fs::path> compare_and_write(const RunManifest& ma, const RunManifest& mb, const fs::path& out_dir,
                                               const EmitFlags& emit, std::ostream& out) {
  const ScenarioConfig ca = ma.resolve();
  const ScenarioConfig cb = mb.resolve();
  require_same_start(ca, cb);

  auto fa = std::async(std::launch::async, [&] { return run_scenario(ca); });
  auto fb = std::async(std::launch::async, [&] { return run_scenario(cb); });
  const ScenarioResult ra = fa.get();
  const ScenarioResult rb = fb.get();

  const std::string stem = ca.name + "_vs_" + cb.name;
  fs::create_directories(out_dir);
  std::vector<fs::path> written;

  const auto diff = max_attitude_difference(ra.record, rb.record);
  Json table;
  table["scenarios"] = Json::array({metrics_json(ca, ra.metrics), metrics_json(cb, rb.metrics)});
  table["max_attitude_difference_deg"] = diff ? Json(*diff) : Json(nullptr);
  if (emit.metrics) {
    written.push_back(out_dir / (stem + ".metrics.json"));
    detail::write_file(written.back(), table.dump(2) + "\n");
  }
  if (emit.svg) {
    const auto& colors = svg::palette();
    std::vector<svg::Panel> panels;
    for (int i = 0; i < 3; ++i) {
      svg::Panel p{std::string(detail::kAxisNames[i]) + " angle", "time (s)", "angle (deg)", {}};
      p.series.push_back({ca.name, detail::times(ra.record),
                          detail::column(ra.record, [i](const auto& s) { return rad_to_deg(s.state.attitude[i]); }),
                          colors[0]});
      p.series.push_back({cb.name, detail::times(rb.record),
                          detail::column(rb.record, [i](const auto& s) { return rad_to_deg(s.state.attitude[i]); }),
                          colors[1], true});
      panels.push_back(std::move(p));
    }
    written.push_back(out_dir / (stem + ".svg"));
    detail::write_file(written.back(), svg::render(panels, 900, 260));
  }

  out << std::left << std::setw(24) << "scenario" << std::setw(14) << "controller" << std::setw(14) << "settle roll"
      << std::setw(14) << "settle pitch" << std::setw(14) << "settle yaw" << "peak |u| (N m)\n";
  for (const auto* pair : {&ca, &cb}) {
    const Metrics& m = pair == &ca ? ra.metrics : rb.metrics;
    out << std::setw(24) << pair->name << std::setw(14) << controller_name(pair->controller());
    for (const auto& s : m.settle_time) out << std::setw(14) << detail::settle_text(s);
    out << m.peak_torque.maxCoeff() << '\n';
  }
  if (diff) out << "max attitude difference: " << *diff << " deg\n";
  for (const auto& p : written) out << "wrote " << p.string() << '\n';
  return written;
}

inline int cmd_compare(const RunManifest& a, const RunManifest& b, const fs::path& out_dir, const EmitFlags& emit,
                       std::ostream& out, std::ostream& err) {
  try {
    compare_and_write(a, b, out_dir, emit, out);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

/// Sets one gain (all three axes) on a scenario. FL: k1, k2. Backstepping:
/// K1, K2, Gamma, Lambda, Sigma.
inline void set_gain(ScenarioConfig& c, const std::string& param, double value) {
  const Vec3 v = Vec3::Constant(value);
  if (auto* fl = std::get_if<FlGains>(&c.gains)) {
    if (param == "k1") {
      fl->k1 = v;
    } else if (param == "k2") {
      fl->k2 = v;
    } else {
      throw ConfigError("unknown gain '" + param + "' for the fl controller (expected k1 or k2)");
    }
    return;
  }
  auto& bs = std::get<BsGains>(c.gains);
  if (param == "K1") {
    bs.k1 = v;
  } else if (param == "K2") {
    bs.k2 = v;
  } else if (param == "Gamma") {
    bs.gamma = v;
  } else if (param == "Lambda") {
    bs.lambda = v;
  } else if (param == "Sigma") {
    bs.sigma = v;
  } else {
    throw ConfigError("unknown gain '" + param + "' for the backstepping controller");
  }
}

/// Runs the scenario once per value of one gain and writes `<name>.sweep.csv`.
inline fs::path sweep_and_write(const RunManifest& manifest, const std::string& param,
                                const std::vector<double>& values, std::ostream& out) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  const ScenarioConfig base = manifest.resolve();
  std::vector<ScenarioConfig> configs;
  for (double v : values) {
    ScenarioConfig c = base;
    set_gain(c, param, v);
    c.validate();
    configs.push_back(std::move(c));
  }
  std::vector<std::future<Metrics>> jobs;
  for (const auto& c : configs) {
    jobs.push_back(std::async(std::launch::async, [&c] { return run_scenario(c).metrics; }));
  }

  std::ostringstream table;
  table << param << ",settle_roll,settle_pitch,settle_yaw,peak_u1,peak_u2,peak_u3,est_error_rms,"
        << "final_err_roll,final_err_pitch,final_err_yaw\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Metrics m = jobs[k].get();
    table << format_double(values[k]);
    for (const auto& s : m.settle_time) table << ',' << (s ? format_double(*s) : std::string(""));
    for (int i = 0; i < 3; ++i) table << ',' << format_double(m.peak_torque[i]);
    table << ',' << (m.est_error_rms ? format_double(*m.est_error_rms) : std::string(""));
    for (int i = 0; i < 3; ++i) table << ',' << format_double(m.final_error[i]);
    table << '\n';
  }
  fs::create_directories(manifest.out_dir);
  const fs::path path = manifest.out_dir / (base.name + ".sweep.csv");
  detail::write_file(path, table.str());
  out << table.str() << "wrote " << path.string() << '\n';
  return path;
}

inline int cmd_sweep(const RunManifest& manifest, const std::string& param, const std::vector<double>& values,
                     std::ostream& out, std::ostream& err) {
  try {
    sweep_and_write(manifest, param, values, out);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace agrosim::cli
