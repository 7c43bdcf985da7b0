#pragma once

/**
 * JSON scenario documents.
 *
 * Angles are in degrees, rates in deg/s, torques in N m, times in seconds.
 * Every key is optional when `preset` names a base scenario; other keys then
 * override the preset (RFC 7386 merge, so `"disturbance": null` removes it).
 * Without a preset, `inertias`, `steering_deg`, `controller`, `gains` and
 * `u_max` are required. Unknown keys are rejected.
 *
 *   {
 *     "name": "my-run",
 *     "preset": "fl-paper",
 *     "inertias": {"J_B": [..3], "J_W": [..3], "J_mW": [..3],
 *                  "geometry": {"a": m, "b": m, "c": m, "m_W": kg}},
 *     "steering_deg": [45, -45],
 *     "initial": {"attitude_deg": [..3], "rate_deg_s": [..3]},
 *     "reference": {"attitude_deg": [..3], "rate_deg_s": [..3], "accel_deg_s2": [..3], "rho": 100},
 *     "controller": "fl" | "backstepping",
 *     "gains": {"k1": .., "k2": ..}                                   (fl)
 *            | {"K1": .., "K2": .., "Gamma": .., "Lambda": .., "Sigma": ..}  (backstepping)
 *     "u_max": 32.1521, "saturation": true,
 *     "dt": 0.001, "horizon": 1.5, "control_hold": "step" | "stage",
 *     "disturbance": {"offset": [..3], "sine_amp": [..3], "sine_freq_rad_s": 2,
 *                     "sine_phase_deg": [..3], "noise_sigma": [..3], "seed": 1} | null,
 *     "adaptation": false, "L_hat_initial": [..3],
 *     "settle_band_deg": 2, "estimate_window_s": [0.7, 1.2]
 *   }
 *
 * Gains accept a scalar (scalar * identity) or a 3-vector.
 */

#include <nlohmann/json.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <string_view>

#include "agrosim/errors.hpp"
#include "agrosim/presets.hpp"
#include "agrosim/sim.hpp"

namespace agrosim {

using Json = nlohmann::json;

namespace detail {

/// Strict object reader: tracks consumed keys and reports the dotted path of
/// offending entries.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("config key '" + display() + "': expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError("config key '" + key_path(key) + "' is required");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number()) throw ConfigError("config key '" + key_path(key) + "': expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : mark(key, fallback); }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return mark(key, fallback);
    const Json& v = at(key);
    if (!v.is_boolean()) throw ConfigError("config key '" + key_path(key) + "': expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_string()) throw ConfigError("config key '" + key_path(key) + "': expected a string");
    return v.get<std::string>();
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError("config key '" + key_path(key) + "': expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  Vec3 vec3(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_array() || v.size() != 3) {
      throw ConfigError("config key '" + key_path(key) + "': expected an array of 3 numbers");
    }
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
      if (!v[i].is_number()) throw ConfigError("config key '" + key_path(key) + "': expected an array of 3 numbers");
      out[i] = v[i].get<double>();
    }
    return out;
  }

  Vec3 vec3_or(const std::string& key, const Vec3& fallback) { return has(key) ? vec3(key) : mark(key, fallback); }

  /// Scalar meaning scalar * identity, or an explicit diagonal.
  Vec3 diagonal(const std::string& key) {
    const Json& v = at(key);
    if (v.is_number()) return Vec3::Constant(v.get<double>());
    return vec3(key);
  }

  Vec3 diagonal_or(const std::string& key, const Vec3& fallback) {
    return has(key) ? diagonal(key) : mark(key, fallback);
  }

  ObjectReader object(const std::string& key) { return ObjectReader(at(key), key_path(key)); }

  /// Accepts an absent or null optional key.
  void skip(const std::string& key) { seen_.insert(key); }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError("config key '" + key_path(key) + "' is not recognized");
    }
  }

 private:
  template <class T>
  T mark(const std::string& key, T value) {
    seen_.insert(key);
    return value;
  }

  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

}  // namespace detail

/// Serializes a scenario with degree-based angles. The result parses back to
/// an equivalent config (angles up to deg/rad rounding).
inline Json to_json(const ScenarioConfig& c) {
  using detail::vec_json;
  Json j;
  j["name"] = c.name;
  Json in{{"J_B", vec_json(c.inertias.body)},
          {"J_W", vec_json(c.inertias.wheel)},
          {"J_mW", vec_json(c.inertias.reflected)}};
  if (c.inertias.geometry) {
    const auto& g = *c.inertias.geometry;
    in["geometry"] = Json{{"a", g.a}, {"b", g.b}, {"c", g.c}, {"m_W", g.m_w}};
  }
  j["inertias"] = in;
  j["steering_deg"] = Json::array({rad_to_deg(c.steering.delta1), rad_to_deg(c.steering.delta2)});
  j["initial"] = Json{{"attitude_deg", vec_json(rad_to_deg(c.initial.attitude))},
                      {"rate_deg_s", vec_json(rad_to_deg(c.initial.rate))}};
  j["reference"] = Json{{"attitude_deg", vec_json(rad_to_deg(c.reference.attitude))},
                        {"rate_deg_s", vec_json(rad_to_deg(c.reference.rate))},
                        {"accel_deg_s2", vec_json(rad_to_deg(c.reference.accel))},
                        {"rho", c.reference_bound}};
  if (const auto* fl = std::get_if<FlGains>(&c.gains)) {
    j["controller"] = "fl";
    j["gains"] = Json{{"k1", vec_json(fl->k1)}, {"k2", vec_json(fl->k2)}};
  } else {
    const auto& bs = std::get<BsGains>(c.gains);
    j["controller"] = "backstepping";
    j["gains"] = Json{{"K1", vec_json(bs.k1)},
                      {"K2", vec_json(bs.k2)},
                      {"Gamma", vec_json(bs.gamma)},
                      {"Lambda", vec_json(bs.lambda)},
                      {"Sigma", vec_json(bs.sigma)}};
  }
  j["u_max"] = c.u_max;
  j["saturation"] = c.saturation;
  j["dt"] = c.dt;
  j["horizon"] = c.horizon;
  j["control_hold"] = c.hold == ControlHold::Step ? "step" : "stage";
  if (c.disturbance) {
    const auto& d = *c.disturbance;
    j["disturbance"] = Json{{"offset", vec_json(d.offset)},
                            {"sine_amp", vec_json(d.sine_amp)},
                            {"sine_freq_rad_s", d.sine_freq},
                            {"sine_phase_deg", vec_json(rad_to_deg(d.sine_phase))},
                            {"noise_sigma", vec_json(d.noise_sigma)},
                            {"seed", d.seed}};
  } else {
    j["disturbance"] = nullptr;
  }
  j["adaptation"] = c.adaptation;
  j["L_hat_initial"] = vec_json(c.adapt_initial);
  j["settle_band_deg"] = rad_to_deg(c.settle_band);
  j["estimate_window_s"] = Json::array({c.estimate_window[0], c.estimate_window[1]});
  return j;
}

inline std::string serialize_config(const ScenarioConfig& c) { return to_json(c).dump(2); }

/// Builds and validates a scenario from a (preset-merged) JSON object.
inline ScenarioConfig from_json(const Json& doc) {
  Json j = doc;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ScenarioConfig c;
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) throw ConfigError("config key 'preset': expected a string");
    const std::string name = j["preset"].get<std::string>();
    Json base = to_json(preset(name));
    j.erase("preset");
    base.merge_patch(j);
    j = std::move(base);
  }

  detail::ObjectReader root(j, "");
  if (root.has("name")) {
    c.name = root.string("name");
  } else {
    root.skip("name");
  }

  {
    auto in = root.object("inertias");
    c.inertias.body = in.vec3("J_B");
    c.inertias.wheel = in.vec3("J_W");
    c.inertias.reflected = in.vec3("J_mW");
    if (in.has("geometry")) {
      auto g = in.object("geometry");
      c.inertias.geometry = WheelGeometry{g.number("a"), g.number("b"), g.number("c"), g.number("m_W")};
      g.finish();
    } else {
      in.skip("geometry");
    }
    in.finish();
  }

  {
    const Json& s = root.at("steering_deg");
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
      throw ConfigError("config key 'steering_deg': expected an array of 2 numbers");
    }
    c.steering = SteeringConfig::from_degrees(s[0].get<double>(), s[1].get<double>());
  }

  if (root.has("initial")) {
    auto in = root.object("initial");
    c.initial.attitude = deg_to_rad(in.vec3_or("attitude_deg", Vec3::Zero()));
    c.initial.rate = deg_to_rad(in.vec3_or("rate_deg_s", Vec3::Zero()));
    in.finish();
  } else {
    root.skip("initial");
  }

  if (root.has("reference")) {
    auto r = root.object("reference");
    c.reference.attitude = deg_to_rad(r.vec3_or("attitude_deg", Vec3::Zero()));
    c.reference.rate = deg_to_rad(r.vec3_or("rate_deg_s", Vec3::Zero()));
    c.reference.accel = deg_to_rad(r.vec3_or("accel_deg_s2", Vec3::Zero()));
    c.reference_bound = r.number_or("rho", Reference::kDefaultBound);
    r.finish();
  } else {
    root.skip("reference");
  }

  const std::string controller = root.string("controller");
  {
    auto g = root.object("gains");
    if (controller == "fl") {
      FlGains fl;
      fl.k1 = g.diagonal("k1");
      fl.k2 = g.diagonal("k2");
      c.gains = fl;
    } else if (controller == "backstepping") {
      BsGains bs;
      bs.k1 = g.diagonal("K1");
      bs.k2 = g.diagonal("K2");
      bs.gamma = g.diagonal_or("Gamma", Vec3::Ones());
      bs.lambda = g.diagonal_or("Lambda", Vec3::Ones());
      bs.sigma = g.diagonal_or("Sigma", Vec3::Ones());
      c.gains = bs;
    } else {
      throw ConfigError("config key 'controller': expected \"fl\" or \"backstepping\"");
    }
    g.finish();
  }

  c.u_max = root.number("u_max");
  c.saturation = root.boolean_or("saturation", true);
  c.dt = root.number_or("dt", 1e-3);
  c.horizon = root.number_or("horizon", 1.5);
  if (root.has("control_hold")) {
    const std::string hold = root.string("control_hold");
    if (hold == "step") {
      c.hold = ControlHold::Step;
    } else if (hold == "stage") {
      c.hold = ControlHold::Stage;
    } else {
      throw ConfigError("config key 'control_hold': expected \"step\" or \"stage\"");
    }
  } else {
    root.skip("control_hold");
  }

  if (root.has("disturbance")) {
    auto d = root.object("disturbance");
    DisturbanceSpec spec;
    spec.offset = d.vec3_or("offset", Vec3::Zero());
    spec.sine_amp = d.vec3_or("sine_amp", Vec3::Zero());
    spec.sine_freq = d.number_or("sine_freq_rad_s", 2.0);
    spec.sine_phase = deg_to_rad(d.vec3_or("sine_phase_deg", Vec3::Zero()));
    spec.noise_sigma = d.vec3_or("noise_sigma", Vec3::Zero());
    if (d.has("seed")) {
      spec.seed = d.unsigned_integer("seed");
    } else {
      d.skip("seed");
    }
    d.finish();
    c.disturbance = spec;
  } else {
    root.skip("disturbance");
  }

  c.adaptation = root.boolean_or("adaptation", false);
  c.adapt_initial = root.vec3_or("L_hat_initial", Vec3::Zero());
  c.settle_band = deg_to_rad(root.number_or("settle_band_deg", 2.0));
  if (root.has("estimate_window_s")) {
    const Json& w = root.at("estimate_window_s");
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number() ||
        !(w[0].get<double>() < w[1].get<double>())) {
      throw ConfigError("config key 'estimate_window_s': expected [t0, t1] with t0 < t1");
    }
    c.estimate_window = {w[0].get<double>(), w[1].get<double>()};
  } else {
    root.skip("estimate_window_s");
  }
  root.finish();

  c.validate();
  return c;
}

inline ScenarioConfig parse_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

}  // namespace agrosim
