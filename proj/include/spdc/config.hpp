// JSON run configuration: parsing with key-path diagnostics and lossless
// serialization (parse(serialize(c)) == c).
#pragma once

#include <spdc/errors.hpp>
#include <spdc/layerstack.hpp>
#include <spdc/materials.hpp>
#include <spdc/simplified.hpp>
#include <spdc/spectra.hpp>

#include <json.hpp>

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace spdc {

struct AxisSpec {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;

  std::vector<double> values() const { return linspace(min, max, count); }
  bool operator==(const AxisSpec&) const = default;
};

struct StackSpec {
  MaterialModel superstrate = material_preset("air");
  MaterialModel film = material_preset("linbo3_e");
  MaterialModel substrate = material_preset("silicon");
  double thickness_um = 10.15;
  bool operator==(const StackSpec&) const = default;
};

struct FieldDrive {
  double chi2_pm_per_V = 0.0;
  double field_V_per_m = 0.0;
  bool operator==(const FieldDrive&) const = default;
};

struct PumpSpec {
  double wavelength_nm = 788.0;
  double waist_um = 5.0;
  std::variant<cdouble, FieldDrive> drive = cdouble(1e-3);
  bool operator==(const PumpSpec&) const = default;
};

/// beta(+) values used by gain-curve when the config does not list any:
/// 25 log-spaced points from 1e-3 to 3.
inline std::vector<double> default_gain_betas() {
  std::vector<double> v(25);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::pow(10.0, -3.0 + (std::log10(3.0) + 3.0) * static_cast<double>(i) / 24.0);
  return v;
}

struct RunConfig {
  StackSpec stack;
  PumpSpec pump;
  AxisSpec wavelength_nm{1100.0, 2400.0, 512};
  AxisSpec angle_rad{-0.5, 0.5, 256};
  Polarization polarization = Polarization::s;
  std::vector<Scheme> schemes{all_schemes.begin(), all_schemes.end()};
  Model model = Model::simplified;
  Normalization normalization = Normalization::unit_max;
  std::optional<EnvelopeModel> envelope;
  double efficiency_ratio = 1.0;
  std::vector<double> gain_betas = default_gain_betas();
  std::string output = "spectrum.csv";

  bool operator==(const RunConfig&) const = default;
};

inline LayerStack make_stack(const RunConfig& c) {
  LayerStack s{c.stack.superstrate, c.stack.film, c.stack.substrate, c.stack.thickness_um * 1e3, {}};
  if (const auto* f = std::get_if<FieldDrive>(&c.pump.drive)) s.chi2_pm_per_V = f->chi2_pm_per_V;
  return s;
}

inline SweepSetup make_setup(const RunConfig& c) {
  SweepSetup s;
  s.stack = make_stack(c);
  s.pump_wavelength_nm = c.pump.wavelength_nm;
  s.waist_um = c.pump.waist_um;
  s.polarization = c.polarization;
  if (const auto* b = std::get_if<cdouble>(&c.pump.drive))
    s.coupling = DirectCoupling{*b};
  else
    s.coupling = FieldCoupling{std::get<FieldDrive>(c.pump.drive).field_V_per_m};
  return s;
}

inline GridAxes make_axes(const RunConfig& c) {
  return {c.wavelength_nm.values(), c.angle_rad.values()};
}

namespace detail {

using nlohmann::json;

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

inline void reject_unknown(const json& j, const std::string& path, std::set<std::string> allowed) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown key");
}

inline const json& required(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing required key");
  return j.at(key);
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

inline double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) throw ConfigError(path, "must be > 0");
  return v;
}

inline std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

inline MaterialModel parse_material(const json& j, const std::string& path) {
  MaterialModel m;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (!is_material_preset(name)) throw ConfigError(path, "unknown material '" + name + "'");
    return material_preset(name);
  }
  require_object(j, path);
  reject_unknown(j, path, {"name", "constant", "sellmeier", "table"});
  m.name = string(required(j, path, "name"), join(path, "name"));
  const int kinds = int(j.contains("constant")) + int(j.contains("sellmeier")) + int(j.contains("table"));
  if (kinds != 1) throw ConfigError(path, "exactly one of constant, sellmeier, table is required");
  if (j.contains("constant")) {
    m.law = ConstantIndex{positive(j.at("constant"), join(path, "constant"))};
  } else if (j.contains("sellmeier")) {
    const std::string p = join(path, "sellmeier");
    const json& s = j.at("sellmeier");
    require_object(s, p);
    reject_unknown(s, p, {"constant", "terms", "min_nm", "max_nm"});
    SellmeierIndex law;
    law.constant = s.contains("constant") ? number(s.at("constant"), join(p, "constant")) : 1.0;
    law.min_nm = positive(required(s, p, "min_nm"), join(p, "min_nm"));
    law.max_nm = positive(required(s, p, "max_nm"), join(p, "max_nm"));
    const json& terms = required(s, p, "terms");
    if (!terms.is_array()) throw ConfigError(join(p, "terms"), "expected an array of [strength, pole_um2]");
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const std::string tp = join(p, "terms") + "[" + std::to_string(k) + "]";
      if (!terms[k].is_array() || terms[k].size() != 2) throw ConfigError(tp, "expected [strength, pole_um2]");
      law.terms.push_back({number(terms[k][0], tp), number(terms[k][1], tp)});
    }
    m.law = std::move(law);
  } else {
    const std::string p = join(path, "table");
    const json& t = j.at("table");
    if (!t.is_array()) throw ConfigError(p, "expected an array of [wavelength_nm, index]");
    TabulatedIndex law;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const std::string tp = p + "[" + std::to_string(k) + "]";
      if (!t[k].is_array() || t[k].size() != 2) throw ConfigError(tp, "expected [wavelength_nm, index]");
      law.samples.push_back({number(t[k][0], tp), number(t[k][1], tp)});
    }
    m.law = std::move(law);
  }
  try {
    validate(m);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return m;
}

inline json material_json(const MaterialModel& m) {
  if (is_material_preset(m.name) && material_preset(m.name) == m) return m.name;
  json j;
  j["name"] = m.name;
  if (const auto* c = std::get_if<ConstantIndex>(&m.law)) {
    j["constant"] = c->n;
  } else if (const auto* s = std::get_if<SellmeierIndex>(&m.law)) {
    json terms = json::array();
    for (const auto& t : s->terms) terms.push_back({t.strength, t.pole_um2});
    j["sellmeier"] = {{"constant", s->constant}, {"terms", terms}, {"min_nm", s->min_nm}, {"max_nm", s->max_nm}};
  } else {
    json rows = json::array();
    for (const auto& p : std::get<TabulatedIndex>(m.law).samples) rows.push_back({p.wavelength_nm, p.index});
    j["table"] = rows;
  }
  return j;
}

inline AxisSpec parse_axis(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"min", "max", "count"});
  AxisSpec a;
  a.min = number(required(j, path, "min"), join(path, "min"));
  a.max = number(required(j, path, "max"), join(path, "max"));
  const json& n = required(j, path, "count");
  if (!n.is_number_integer() || n.get<long long>() < 2) throw ConfigError(join(path, "count"), "must be an integer >= 2");
  a.count = n.get<std::size_t>();
  if (!(a.min < a.max)) throw ConfigError(path, "min must be < max");
  return a;
}

inline Scheme parse_scheme(const std::string& s, const std::string& path) {
  for (Scheme x : all_schemes)
    if (s == to_string(x)) return x;
  throw ConfigError(path, "unknown scheme '" + s + "' (expected ff, bb, fb or bf)");
}

inline Model parse_model(const std::string& s, const std::string& path) {
  for (Model m : {Model::rigorous, Model::simplified, Model::nonresonant})
    if (s == to_string(m)) return m;
  throw ConfigError(path, "unknown model '" + s + "' (expected rigorous, simplified or nonresonant)");
}

}  // namespace detail

inline Scheme parse_scheme(const std::string& s) { return detail::parse_scheme(s, "scheme"); }
inline Model parse_model(const std::string& s) { return detail::parse_model(s, "model"); }

inline RunConfig parse_config(const std::string& text) {
  using detail::join;
  using detail::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  detail::require_object(root, "");
  detail::reject_unknown(root, "", {"stack", "pump", "grid", "polarization", "schemes", "model", "normalization",
                                    "envelope", "efficiency_ratio", "gain_curve", "output"});
  RunConfig c;

  {
    const json& s = detail::required(root, "", "stack");
    detail::require_object(s, "stack");
    detail::reject_unknown(s, "stack", {"superstrate", "film", "substrate", "thickness_um"});
    c.stack.superstrate = detail::parse_material(detail::required(s, "stack", "superstrate"), "stack.superstrate");
    c.stack.film = detail::parse_material(detail::required(s, "stack", "film"), "stack.film");
    c.stack.substrate = detail::parse_material(detail::required(s, "stack", "substrate"), "stack.substrate");
    c.stack.thickness_um = detail::positive(detail::required(s, "stack", "thickness_um"), "stack.thickness_um");
  }

  {
    const json& p = detail::required(root, "", "pump");
    detail::require_object(p, "pump");
    detail::reject_unknown(p, "pump", {"wavelength_nm", "waist_um", "beta_plus", "chi2_pm_per_V", "field_V_per_m"});
    c.pump.wavelength_nm = detail::positive(detail::required(p, "pump", "wavelength_nm"), "pump.wavelength_nm");
    c.pump.waist_um = detail::positive(detail::required(p, "pump", "waist_um"), "pump.waist_um");
    const bool has_beta = p.contains("beta_plus");
    const bool has_chi2 = p.contains("chi2_pm_per_V");
    const bool has_field = p.contains("field_V_per_m");
    if (has_beta && (has_chi2 || has_field))
      throw ConfigError("pump", "beta_plus and chi2_pm_per_V/field_V_per_m are mutually exclusive");
    if (has_beta) {
      const json& b = p.at("beta_plus");
      if (b.is_array()) {
        if (b.size() != 2) throw ConfigError("pump.beta_plus", "expected a number or [re, im]");
        c.pump.drive = cdouble(detail::number(b[0], "pump.beta_plus[0]"), detail::number(b[1], "pump.beta_plus[1]"));
      } else {
        c.pump.drive = cdouble(detail::number(b, "pump.beta_plus"), 0.0);
      }
    } else if (has_chi2 || has_field) {
      FieldDrive f;
      f.chi2_pm_per_V = detail::number(detail::required(p, "pump", "chi2_pm_per_V"), "pump.chi2_pm_per_V");
      f.field_V_per_m = detail::number(detail::required(p, "pump", "field_V_per_m"), "pump.field_V_per_m");
      c.pump.drive = f;
    } else {
      throw ConfigError("pump", "one of beta_plus or chi2_pm_per_V + field_V_per_m is required");
    }
  }

  {
    const json& g = detail::required(root, "", "grid");
    detail::require_object(g, "grid");
    detail::reject_unknown(g, "grid", {"wavelength_nm", "angle_rad"});
    c.wavelength_nm = detail::parse_axis(detail::required(g, "grid", "wavelength_nm"), "grid.wavelength_nm");
    c.angle_rad = detail::parse_axis(detail::required(g, "grid", "angle_rad"), "grid.angle_rad");
    if (!(c.wavelength_nm.min > 0.0)) throw ConfigError("grid.wavelength_nm.min", "must be > 0");
  }

  if (root.contains("polarization")) {
    const std::string s = detail::string(root.at("polarization"), "polarization");
    if (s == "s")
      c.polarization = Polarization::s;
    else if (s == "p")
      c.polarization = Polarization::p;
    else
      throw ConfigError("polarization", "expected \"s\" or \"p\"");
  }

  if (root.contains("schemes")) {
    const json& s = root.at("schemes");
    if (!s.is_array() || s.empty()) throw ConfigError("schemes", "expected a non-empty array");
    c.schemes.clear();
    for (std::size_t k = 0; k < s.size(); ++k) {
      const std::string p = "schemes[" + std::to_string(k) + "]";
      c.schemes.push_back(detail::parse_scheme(detail::string(s[k], p), p));
    }
  }

  if (root.contains("model")) c.model = detail::parse_model(detail::string(root.at("model"), "model"), "model");

  if (root.contains("normalization")) {
    const std::string s = detail::string(root.at("normalization"), "normalization");
    if (s == "raw")
      c.normalization = Normalization::raw;
    else if (s == "unit_max")
      c.normalization = Normalization::unit_max;
    else
      throw ConfigError("normalization", "expected \"raw\" or \"unit_max\"");
  }

  if (root.contains("envelope")) {
    const json& e = root.at("envelope");
    detail::require_object(e, "envelope");
    detail::reject_unknown(e, "envelope", {"center_nm", "fwhm_nm", "amplitude"});
    EnvelopeModel env;
    env.center_nm = detail::number(detail::required(e, "envelope", "center_nm"), "envelope.center_nm");
    env.fwhm_nm = detail::positive(detail::required(e, "envelope", "fwhm_nm"), "envelope.fwhm_nm");
    env.amplitude = e.contains("amplitude") ? detail::positive(e.at("amplitude"), "envelope.amplitude") : 1.0;
    c.envelope = env;
  }

  if (root.contains("efficiency_ratio"))
    c.efficiency_ratio = detail::positive(root.at("efficiency_ratio"), "efficiency_ratio");

  if (root.contains("gain_curve")) {
    const json& g = root.at("gain_curve");
    detail::require_object(g, "gain_curve");
    detail::reject_unknown(g, "gain_curve", {"beta_values"});
    const json& b = detail::required(g, "gain_curve", "beta_values");
    if (!b.is_array() || b.empty()) throw ConfigError("gain_curve.beta_values", "expected a non-empty array");
    c.gain_betas.clear();
    for (std::size_t k = 0; k < b.size(); ++k)
      c.gain_betas.push_back(detail::positive(b[k], "gain_curve.beta_values[" + std::to_string(k) + "]"));
  }

  if (root.contains("output")) c.output = detail::string(root.at("output"), "output");
  return c;
}

/// Compact single-line JSON (used in output headers) or indented.
inline std::string serialize_config(const RunConfig& c, int indent = -1) {
  using detail::json;
  json root;
  root["stack"] = {{"superstrate", detail::material_json(c.stack.superstrate)},
                   {"film", detail::material_json(c.stack.film)},
                   {"substrate", detail::material_json(c.stack.substrate)},
                   {"thickness_um", c.stack.thickness_um}};
  json pump = {{"wavelength_nm", c.pump.wavelength_nm}, {"waist_um", c.pump.waist_um}};
  if (const auto* b = std::get_if<cdouble>(&c.pump.drive)) {
    if (b->imag() == 0.0)
      pump["beta_plus"] = b->real();
    else
      pump["beta_plus"] = {b->real(), b->imag()};
  } else {
    const auto& f = std::get<FieldDrive>(c.pump.drive);
    pump["chi2_pm_per_V"] = f.chi2_pm_per_V;
    pump["field_V_per_m"] = f.field_V_per_m;
  }
  root["pump"] = pump;
  auto axis = [](const AxisSpec& a) { return json{{"min", a.min}, {"max", a.max}, {"count", a.count}}; };
  root["grid"] = {{"wavelength_nm", axis(c.wavelength_nm)}, {"angle_rad", axis(c.angle_rad)}};
  root["polarization"] = c.polarization == Polarization::s ? "s" : "p";
  json schemes = json::array();
  for (Scheme s : c.schemes) schemes.push_back(to_string(s));
  root["schemes"] = schemes;
  root["model"] = to_string(c.model);
  root["normalization"] = c.normalization == Normalization::raw ? "raw" : "unit_max";
  if (c.envelope)
    root["envelope"] = {{"center_nm", c.envelope->center_nm},
                        {"fwhm_nm", c.envelope->fwhm_nm},
                        {"amplitude", c.envelope->amplitude}};
  root["efficiency_ratio"] = c.efficiency_ratio;
  root["gain_curve"] = {{"beta_values", c.gain_betas}};
  root["output"] = c.output;
  return root.dump(indent);
}

}  // namespace spdc
