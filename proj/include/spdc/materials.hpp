// Refractive-index models and wavevector bookkeeping for pump, signal and idler.
//
// Units: wavelengths in nm, angles in radians, wavevectors in rad/nm.
#pragma once

#include <spdc/errors.hpp>
#include <spdc/material_data.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace spdc {

/// Non-dispersive medium.
struct ConstantIndex {
  double n = 1.0;
  bool operator==(const ConstantIndex&) const = default;
};

struct SellmeierTerm {
  double strength = 0.0;  ///< dimensionless
  double pole_um2 = 0.0;  ///< resonance wavelength squared, um^2
  bool operator==(const SellmeierTerm&) const = default;
};

/// n^2 = constant + sum_k strength_k lambda^2 / (lambda^2 - pole_k), lambda in um.
struct SellmeierIndex {
  double constant = 1.0;
  std::vector<SellmeierTerm> terms;
  double min_nm = 0.0;
  double max_nm = 0.0;
  bool operator==(const SellmeierIndex&) const = default;
};

struct IndexSample {
  double wavelength_nm = 0.0;
  double index = 0.0;
  bool operator==(const IndexSample&) const = default;
};

/// Samples strictly increasing in wavelength, linear interpolation between them.
struct TabulatedIndex {
  std::vector<IndexSample> samples;
  bool operator==(const TabulatedIndex&) const = default;
};

/// A named dispersion law.
struct MaterialModel {
  std::string name;
  std::variant<ConstantIndex, SellmeierIndex, TabulatedIndex> law;

  bool operator==(const MaterialModel&) const = default;
};

namespace detail {

inline std::string range_message(const MaterialModel& m, double wavelength_nm, double lo,
                                 double hi) {
  std::ostringstream os;
  os << "material '" << m.name << "': wavelength " << wavelength_nm
     << " nm outside validity range [" << lo << ", " << hi << "] nm";
  return os.str();
}

}  // namespace detail

/// Throws std::invalid_argument if the model violates its own invariants.
inline void validate(const MaterialModel& m) {
  struct Visitor {
    const MaterialModel& m;
    void operator()(const ConstantIndex& c) const {
      if (!(c.n > 0.0) || !std::isfinite(c.n))
        throw std::invalid_argument("material '" + m.name + "': constant index must be > 0");
    }
    void operator()(const SellmeierIndex& s) const {
      if (!(s.min_nm > 0.0) || !(s.max_nm > s.min_nm))
        throw std::invalid_argument("material '" + m.name +
                                    "': Sellmeier range needs 0 < min_nm < max_nm");
      for (const auto& t : s.terms) {
        const double lo = std::pow(s.min_nm * 1e-3, 2), hi = std::pow(s.max_nm * 1e-3, 2);
        if (t.strength != 0.0 && t.pole_um2 >= lo && t.pole_um2 <= hi)
          throw std::invalid_argument("material '" + m.name +
                                      "': Sellmeier pole inside validity range");
      }
    }
    void operator()(const TabulatedIndex& t) const {
      if (t.samples.size() < 2)
        throw std::invalid_argument("material '" + m.name + "': table needs >= 2 samples");
      for (std::size_t i = 0; i < t.samples.size(); ++i) {
        if (!(t.samples[i].index > 0.0))
          throw std::invalid_argument("material '" + m.name + "': table index must be > 0");
        if (i > 0 && !(t.samples[i].wavelength_nm > t.samples[i - 1].wavelength_nm))
          throw std::invalid_argument("material '" + m.name +
                                      "': table wavelengths must be strictly increasing");
      }
    }
  };
  std::visit(Visitor{m}, m.law);
}

/// Real refractive index at a vacuum wavelength. Throws RangeError outside the
/// model's validity range (tables are never extrapolated).
inline double refractive_index(const MaterialModel& model, double wavelength_nm) {
  struct Visitor {
    const MaterialModel& m;
    double lambda;
    double operator()(const ConstantIndex& c) const {
      if (!(lambda > 0.0)) throw RangeError(detail::range_message(m, lambda, 0.0, INFINITY));
      return c.n;
    }
    double operator()(const SellmeierIndex& s) const {
      if (!(lambda >= s.min_nm && lambda <= s.max_nm))
        throw RangeError(detail::range_message(m, lambda, s.min_nm, s.max_nm));
      const double l2 = (lambda * 1e-3) * (lambda * 1e-3);
      double n2 = s.constant;
      for (const auto& t : s.terms) n2 += t.strength * l2 / (l2 - t.pole_um2);
      if (!(n2 > 0.0)) throw RangeError(detail::range_message(m, lambda, s.min_nm, s.max_nm));
      return std::sqrt(n2);
    }
    double operator()(const TabulatedIndex& t) const {
      const auto& xs = t.samples;
      if (xs.empty() || !(lambda >= xs.front().wavelength_nm && lambda <= xs.back().wavelength_nm))
        throw RangeError(detail::range_message(m, lambda, xs.empty() ? 0.0 : xs.front().wavelength_nm,
                                               xs.empty() ? 0.0 : xs.back().wavelength_nm));
      auto hi = std::lower_bound(xs.begin(), xs.end(), lambda,
                                 [](const IndexSample& s, double l) { return s.wavelength_nm < l; });
      if (hi->wavelength_nm == lambda) return hi->index;
      auto lo = hi - 1;
      const double f = (lambda - lo->wavelength_nm) / (hi->wavelength_nm - lo->wavelength_nm);
      return lo->index + f * (hi->index - lo->index);
    }
  };
  return std::visit(Visitor{model, wavelength_nm}, model.law);
}

/// Built-in presets: "air", "linbo3_e", "linbo3_o", "silicon".
inline MaterialModel material_preset(std::string_view name) {
  auto sellmeier = [](const auto& poles) {
    SellmeierIndex s{1.0, {}, data::linbo3_min_nm, data::linbo3_max_nm};
    for (const auto& p : poles) s.terms.push_back({p.strength, p.pole_um2});
    return s;
  };
  if (name == "air") return {"air", ConstantIndex{1.0}};
  if (name == "linbo3_e") return {"linbo3_e", sellmeier(data::linbo3_extraordinary)};
  if (name == "linbo3_o") return {"linbo3_o", sellmeier(data::linbo3_ordinary)};
  if (name == "silicon") {
    TabulatedIndex t;
    t.samples.reserve(data::silicon_index.size());
    for (const auto& p : data::silicon_index) t.samples.push_back({p.wavelength_nm, p.index});
    return {"silicon", std::move(t)};
  }
  throw std::invalid_argument("unknown material preset '" + std::string(name) + "'");
}

inline bool is_material_preset(std::string_view name) {
  return name == "air" || name == "linbo3_e" || name == "linbo3_o" || name == "silicon";
}

enum class Polarization { s, p };
enum class WaveRole { pump, signal, idler };

/// One plane-wave mode inside the film. The angle is measured from the z
/// (pump) axis.
struct Mode {
  double wavelength_nm = 0.0;
  double internal_angle = 0.0;
  Polarization polarization = Polarization::s;
  WaveRole role = WaveRole::signal;
};

/// Largest |internal_angle| treated as propagating. Beyond it the mode is
/// considered grazing and rejected.
inline constexpr double grazing_limit = std::numbers::pi / 2 - 1e-9;

inline void validate(const Mode& m) {
  if (!(m.wavelength_nm > 0.0) || !std::isfinite(m.wavelength_nm))
    throw std::invalid_argument("mode wavelength must be > 0");
  if (!(std::abs(m.internal_angle) < std::numbers::pi / 2))
    throw GeometryError("mode internal angle must satisfy |theta| < pi/2");
}

struct WavevectorComponents {
  double parallel = 0.0;       ///< along z, rad/nm
  double perpendicular = 0.0;  ///< in the film plane, rad/nm
};

/// k = 2 pi n / lambda split into (k cos theta, k sin theta).
inline WavevectorComponents wavevector_components(const Mode& mode, double n) {
  const double k = 2.0 * std::numbers::pi * n / mode.wavelength_nm;
  return {k * std::cos(mode.internal_angle), k * std::sin(mode.internal_angle)};
}

}  // namespace spdc
