// Sweep engines: frequency-angular spectra, gain/agreement curves and 1D
// detection spectra.
//
// Every pixel is an independent pure computation over an immutable
// SweepContext, so sweeps are split across worker threads by index range and
// the result does not depend on the worker count.
#pragma once

#include <spdc/errors.hpp>
#include <spdc/layerstack.hpp>
#include <spdc/materials.hpp>
#include <spdc/rigorous.hpp>
#include <spdc/simplified.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <thread>
#include <variant>
#include <vector>

namespace spdc {

enum class Model { rigorous, simplified, nonresonant };
enum class Normalization { raw, unit_max };

inline const char* to_string(Model m) {
  switch (m) {
    case Model::rigorous: return "rigorous";
    case Model::simplified: return "simplified";
    case Model::nonresonant: return "nonresonant";
  }
  return "?";
}

/// beta(+) given directly; constant over the sweep.
struct DirectCoupling {
  cdouble beta_plus;
};

/// beta(+-) derived per pixel from chi2 (on the stack) and the incident
/// pump field in the superstrate.
struct FieldCoupling {
  double field_V_per_m = 0.0;
};

using Coupling = std::variant<DirectCoupling, FieldCoupling>;

struct SweepSetup {
  LayerStack stack;
  double pump_wavelength_nm = 0.0;
  double waist_um = 0.0;
  Polarization polarization = Polarization::s;
  Coupling coupling = DirectCoupling{1e-3};
};

/// Energy-conserving idler whose angle cancels the transverse mismatch when
/// possible. If it cannot, the angle is clamped to +-pi/2 (the returned mode
/// is then grazing and rejected by the interface and interaction routines).
inline Mode solve_idler(const Mode& pump, const Mode& signal, const LayerStack& stack) {
  if (!(signal.wavelength_nm > pump.wavelength_nm))
    throw EnergyConservationError("signal wavelength must exceed the pump wavelength");
  Mode idler;
  idler.role = WaveRole::idler;
  idler.polarization = signal.polarization;
  idler.wavelength_nm =
      pump.wavelength_nm * signal.wavelength_nm / (signal.wavelength_nm - pump.wavelength_nm);
  const auto ks = wavevector_components(signal, refractive_index(stack.film, signal.wavelength_nm));
  const double ki = 2.0 * std::numbers::pi * refractive_index(stack.film, idler.wavelength_nm) /
                    idler.wavelength_nm;
  idler.internal_angle = std::asin(std::clamp(-ks.perpendicular / ki, -1.0, 1.0));
  return idler;
}

/// Per-pixel outcome classes. Anything other than ok masks the pixel.
enum class PixelStatus : std::uint8_t {
  ok = 0,
  out_of_range,
  grazing,
  resonance_pole,
  singular,
  energy,
  non_finite,
};

inline const char* to_string(PixelStatus s) {
  switch (s) {
    case PixelStatus::ok: return "ok";
    case PixelStatus::out_of_range: return "out_of_range";
    case PixelStatus::grazing: return "grazing";
    case PixelStatus::resonance_pole: return "resonance_pole";
    case PixelStatus::singular: return "singular";
    case PixelStatus::energy: return "energy";
    case PixelStatus::non_finite: return "non_finite";
  }
  return "?";
}

struct PixelValues {
  std::array<double, 4> by_scheme{};  ///< indexed by Scheme
  PixelStatus status = PixelStatus::ok;

  double operator[](Scheme s) const { return by_scheme[static_cast<std::size_t>(s)]; }
};

/// Pump-side quantities shared by all pixels of a sweep.
class SweepContext {
public:
  explicit SweepContext(SweepSetup setup) : setup_(std::move(setup)) {
    validate(setup_.stack);
    if (!(setup_.waist_um > 0.0)) throw std::invalid_argument("pump waist must be > 0");
    pump_.wavelength_nm = setup_.pump_wavelength_nm;
    pump_.internal_angle = 0.0;
    pump_.polarization = Polarization::s;
    pump_.role = WaveRole::pump;
    validate(pump_);
    const auto coeffs = interface_coeffs(setup_.stack, pump_);
    pump_ratios_ = pump_enhancement(coeffs, propagation_phase(setup_.stack, pump_));
    if (const auto* direct = std::get_if<DirectCoupling>(&setup_.coupling)) {
      beta_plus_ = direct->beta_plus;
      beta_minus_ = direct->beta_plus * (pump_ratios_.backward / pump_ratios_.forward);
    } else {
      if (!setup_.stack.chi2_pm_per_V)
        throw std::invalid_argument("field coupling needs chi2 on the layer stack");
      // Flux-normalised t1 -> field transmission from the superstrate.
      const double n1 = refractive_index(setup_.stack.superstrate, pump_.wavelength_nm);
      const double nf = refractive_index(setup_.stack.film, pump_.wavelength_nm);
      const double e0 = std::get<FieldCoupling>(setup_.coupling).field_V_per_m * std::sqrt(n1 / nf);
      fields_ = {pump_ratios_.forward * e0, pump_ratios_.backward * e0};
    }
  }

  const SweepSetup& setup() const noexcept { return setup_; }
  const Mode& pump() const noexcept { return pump_; }
  const PumpFieldRatios& pump_ratios() const noexcept { return pump_ratios_; }

  Mode signal_mode(double wavelength_nm, double angle) const {
    return {wavelength_nm, angle, setup_.polarization, WaveRole::signal};
  }

  InteractionParams params(const Mode& signal, const Mode& idler) const {
    if (std::holds_alternative<DirectCoupling>(setup_.coupling))
      return interaction_params_from_beta(setup_.stack, pump_, signal, idler, beta_plus_, beta_minus_);
    return interaction_params(setup_.stack, pump_, signal, idler, fields_);
  }

  /// Evaluates one pixel; throws on numerical failure.
  PixelValues evaluate_or_throw(double signal_wavelength_nm, double signal_angle, Model model) const {
    const Mode signal = signal_mode(signal_wavelength_nm, signal_angle);
    validate(signal);
    const Mode idler = solve_idler(pump_, signal, setup_.stack);
    const auto& stack = setup_.stack;
    PixelValues out;

    if (model == Model::nonresonant) {
      const auto kp = wavevector_components(pump_, refractive_index(stack.film, pump_.wavelength_nm));
      const auto ks = wavevector_components(signal, refractive_index(stack.film, signal.wavelength_nm));
      const auto ki = wavevector_components(idler, refractive_index(stack.film, idler.wavelength_nm));
      out.by_scheme[0] = nonresonant_probability(kp.parallel - ks.parallel - ki.parallel,
                                                 kp.perpendicular - ks.perpendicular - ki.perpendicular,
                                                 stack.thickness_nm, setup_.waist_um);
      return out;
    }

    const InteractionParams p = params(signal, idler);
    const InterfaceCoeffs cs = interface_coeffs(stack, signal);
    const InterfaceCoeffs ci = interface_coeffs(stack, idler);
    const double phase_s = propagation_phase(stack, signal);
    const double phase_i = propagation_phase(stack, idler);

    if (model == Model::simplified) {
      const double pair = nonresonant_probability(p.delta_k_parallel, p.delta_k_perpendicular,
                                                  stack.thickness_nm, setup_.waist_um);
      const auto es = field_enhancements(cs, phase_s);
      const auto ei = field_enhancements(ci, phase_i);
      for (Scheme s : all_schemes)
        out.by_scheme[static_cast<std::size_t>(s)] =
            simplified_probability(pair, filter_function(s, p.beta_plus, p.beta_minus, es, ei));
      return out;
    }

    const auto b = boundary_matrices(cs, ci, phase_s, phase_i);
    const auto probs = pair_probabilities(scattering_matrix(interaction_matrix(p), b.tau1, b.tau2, b.rho));
    out.by_scheme = {probs.ff, probs.bb, probs.fb, probs.bf};
    return out;
  }

  /// Evaluates one pixel, converting failures into a masked status.
  PixelValues evaluate(double signal_wavelength_nm, double signal_angle, Model model) const {
    PixelValues out;
    try {
      out = evaluate_or_throw(signal_wavelength_nm, signal_angle, model);
    } catch (const RangeError&) {
      out.status = PixelStatus::out_of_range;
    } catch (const GeometryError&) {
      out.status = PixelStatus::grazing;
    } catch (const ResonancePoleError&) {
      out.status = PixelStatus::resonance_pole;
    } catch (const SingularSystemError&) {
      out.status = PixelStatus::singular;
    } catch (const EnergyConservationError&) {
      out.status = PixelStatus::energy;
    }
    if (out.status == PixelStatus::ok &&
        !std::all_of(out.by_scheme.begin(), out.by_scheme.end(), [](double v) { return std::isfinite(v); }))
      out.status = PixelStatus::non_finite;
    if (out.status != PixelStatus::ok) out.by_scheme.fill(0.0);
    return out;
  }

private:
  SweepSetup setup_;
  Mode pump_;
  PumpFieldRatios pump_ratios_{};
  cdouble beta_plus_, beta_minus_;
  PumpFieldAmplitudes fields_{};
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers, contiguous chunks.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
}

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw std::invalid_argument("linspace needs at least 2 points");
  std::vector<double> v(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) v[i] = lo + step * static_cast<double>(i);
  v.back() = hi;
  return v;
}

struct GridAxes {
  std::vector<double> wavelengths_nm;
  std::vector<double> angles_rad;
};

/// Default frequency-angular window: 1100-2400 nm x -0.5..0.5 rad, 512 x 256.
inline GridAxes default_axes() {
  return {linspace(1100.0, 2400.0, 512), linspace(-0.5, 0.5, 256)};
}

/// Row-major (wavelength, angle) intensities for each scheme.
struct SpectrumGrid {
  std::vector<double> signal_wavelengths_nm;
  std::vector<double> internal_angles_rad;
  std::array<std::vector<double>, 4> intensity;
  std::vector<PixelStatus> status;
  Normalization normalization = Normalization::raw;

  std::size_t index(std::size_t wl, std::size_t angle) const {
    return wl * internal_angles_rad.size() + angle;
  }
  const std::vector<double>& scheme(Scheme s) const { return intensity[static_cast<std::size_t>(s)]; }
  double at(Scheme s, std::size_t wl, std::size_t angle) const { return scheme(s)[index(wl, angle)]; }
  bool valid(std::size_t i) const { return status[i] == PixelStatus::ok; }
  std::size_t masked_count() const {
    return static_cast<std::size_t>(
        std::count_if(status.begin(), status.end(), [](PixelStatus s) { return s != PixelStatus::ok; }));
  }
  std::vector<std::uint8_t> mask() const {
    std::vector<std::uint8_t> m(status.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = valid(i) ? 1 : 0;
    return m;
  }
};

/// Divides each scheme by its maximum over valid pixels (schemes that are
/// identically zero are left untouched).
inline void normalize_unit_max(SpectrumGrid& g) {
  for (auto& values : g.intensity) {
    double peak = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (g.valid(i)) peak = std::max(peak, values[i]);
    if (peak > 0.0)
      for (double& v : values) v /= peak;
  }
  g.normalization = Normalization::unit_max;
}

inline SpectrumGrid frequency_angular_spectrum(const SweepContext& ctx, const GridAxes& axes, Model model,
                                               int threads = 1,
                                               Normalization norm = Normalization::unit_max) {
  if (axes.wavelengths_nm.empty() || axes.angles_rad.empty())
    throw std::invalid_argument("spectrum grid axes must be non-empty");
  for (const auto* axis : {&axes.wavelengths_nm, &axes.angles_rad})
    if (!std::is_sorted(axis->begin(), axis->end()) ||
        std::adjacent_find(axis->begin(), axis->end()) != axis->end())
      throw std::invalid_argument("spectrum grid axes must be strictly increasing");

  SpectrumGrid g;
  g.signal_wavelengths_nm = axes.wavelengths_nm;
  g.internal_angles_rad = axes.angles_rad;
  const std::size_t n = axes.wavelengths_nm.size() * axes.angles_rad.size();
  for (auto& v : g.intensity) v.assign(n, 0.0);
  g.status.assign(n, PixelStatus::ok);

  parallel_for(n, threads, [&](std::size_t idx) {
    const std::size_t i = idx / axes.angles_rad.size(), j = idx % axes.angles_rad.size();
    const PixelValues px = ctx.evaluate(axes.wavelengths_nm[i], axes.angles_rad[j], model);
    g.status[idx] = px.status;
    for (std::size_t s = 0; s < 4; ++s) g.intensity[s][idx] = px.by_scheme[s];
  });
  if (norm == Normalization::unit_max) normalize_unit_max(g);
  return g;
}

inline SpectrumGrid frequency_angular_spectrum(const SweepSetup& setup, const GridAxes& axes, Model model,
                                               int threads = 1,
                                               Normalization norm = Normalization::unit_max) {
  return frequency_angular_spectrum(SweepContext(setup), axes, model, threads, norm);
}

/// Coefficient of determination of `a` against reference `b`, by default
/// after scaling each to unit maximum. Entries with valid[i] == 0 are ignored.
inline double r_squared(std::span<const double> a, std::span<const double> b,
                        std::span<const std::uint8_t> valid = {}, bool unit_max = true) {
  if (a.size() != b.size() || (!valid.empty() && valid.size() != a.size()))
    throw std::invalid_argument("r_squared: inputs differ in shape");
  auto use = [&](std::size_t i) { return valid.empty() || valid[i] != 0; };
  double max_a = 0.0, max_b = 0.0, mean_b = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!use(i)) continue;
    max_a = std::max(max_a, a[i]);
    max_b = std::max(max_b, b[i]);
    mean_b += b[i];
    ++count;
  }
  if (count == 0 || (unit_max && !(max_b > 0.0))) throw UndefinedStatisticError("r_squared: reference has no variance");
  const double scale_a = unit_max && max_a > 0.0 ? 1.0 / max_a : 1.0;
  const double scale_b = unit_max ? 1.0 / max_b : 1.0;
  mean_b = mean_b * scale_b / static_cast<double>(count);
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!use(i)) continue;
    const double ai = a[i] * scale_a, bi = b[i] * scale_b;
    ss_res += (ai - bi) * (ai - bi);
    ss_tot += (bi - mean_b) * (bi - mean_b);
  }
  if (!(ss_tot > 0.0)) throw UndefinedStatisticError("r_squared: reference has no variance");
  return 1.0 - ss_res / ss_tot;
}

/// Mask of pixels valid in both grids.
inline std::vector<std::uint8_t> joint_mask(const SpectrumGrid& a, const SpectrumGrid& b) {
  if (a.status.size() != b.status.size()) throw std::invalid_argument("grids differ in shape");
  std::vector<std::uint8_t> m(a.status.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = (a.valid(i) && b.valid(i)) ? 1 : 0;
  return m;
}

/// R^2 of one scheme of `a` against reference `b` over pixels valid in both.
inline double r_squared(const SpectrumGrid& a, const SpectrumGrid& b, Scheme s) {
  const auto m = joint_mask(a, b);
  return r_squared(a.scheme(s), b.scheme(s), m);
}

/// Largest |a - b| after unit-max scaling, over pixels valid in both.
inline double max_abs_deviation(const SpectrumGrid& a, const SpectrumGrid& b, Scheme s) {
  const auto m = joint_mask(a, b);
  const auto& va = a.scheme(s);
  const auto& vb = b.scheme(s);
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i]) ma = std::max(ma, va[i]), mb = std::max(mb, vb[i]);
  if (!(ma > 0.0) || !(mb > 0.0)) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i]) worst = std::max(worst, std::abs(va[i] / ma - vb[i] / mb));
  return worst;
}

struct GainCurvePoint {
  double beta_plus = 0.0;
  double beta_normalized = 0.0;  ///< |beta+| / |Delta/2| at the degenerate collinear point
  double re_gamma_plus = 0.0;
  double r_squared = 0.0;        ///< NaN when undefined
};

/// Phase mismatch L dk_par for degenerate collinear emission (lambda_s = lambda_i = 2 lambda_p).
inline double degenerate_phase_mismatch(const SweepSetup& setup) {
  const SweepContext ctx(setup);
  const Mode signal = ctx.signal_mode(2.0 * setup.pump_wavelength_nm, 0.0);
  const Mode idler = solve_idler(ctx.pump(), signal, setup.stack);
  return interaction_params_from_beta(setup.stack, ctx.pump(), signal, idler, 0.0, 0.0).phase_mismatch;
}

/// For each beta(+): R^2 between the simplified and rigorous ff angular
/// spectra at the degenerate wavelength, plus the collinear gain term.
inline std::vector<GainCurvePoint> gain_and_agreement_curve(const SweepSetup& setup,
                                                            const std::vector<double>& angles_rad,
                                                            const std::vector<double>& beta_values,
                                                            int threads = 1) {
  const double half_delta = 0.5 * std::abs(degenerate_phase_mismatch(setup));
  const GridAxes axes{{2.0 * setup.pump_wavelength_nm}, angles_rad};
  std::vector<GainCurvePoint> out;
  out.reserve(beta_values.size());
  for (double beta : beta_values) {
    if (!(beta > 0.0)) throw std::invalid_argument("gain curve beta values must be > 0");
    SweepSetup s = setup;
    s.coupling = DirectCoupling{beta};
    const SweepContext ctx(s);
    const auto simple = frequency_angular_spectrum(ctx, axes, Model::simplified, threads);
    const auto rig = frequency_angular_spectrum(ctx, axes, Model::rigorous, threads);
    GainCurvePoint p;
    p.beta_plus = beta;
    p.beta_normalized = beta / half_delta;
    p.re_gamma_plus = gain_term(beta, 2.0 * half_delta).real();
    try {
      p.r_squared = r_squared(simple, rig, Scheme::ff);
    } catch (const UndefinedStatisticError&) {
      p.r_squared = std::nan("");
    }
    out.push_back(p);
  }
  return out;
}

struct EnvelopeModel {
  double center_nm = 0.0;
  double fwhm_nm = INFINITY;
  double amplitude = 1.0;

  bool operator==(const EnvelopeModel&) const = default;

  double operator()(double wavelength_nm) const {
    const double x = (wavelength_nm - center_nm) / fwhm_nm;
    return amplitude * std::exp(-4.0 * std::numbers::ln2 * x * x);
  }
};

inline void validate(const EnvelopeModel& e) {
  if (!(e.fwhm_nm > 0.0) || !(e.amplitude > 0.0))
    throw std::invalid_argument("envelope needs fwhm > 0 and amplitude > 0");
}

enum class DetectionScheme { forward, backward, forward_backward };

inline const char* to_string(DetectionScheme s) {
  switch (s) {
    case DetectionScheme::forward: return "forward";
    case DetectionScheme::backward: return "backward";
    case DetectionScheme::forward_backward: return "forward_backward";
  }
  return "?";
}

/// Relative coincidence rates at normal emission versus signal wavelength,
/// normalised so that the forward scheme peaks at 1.
struct DetectionSpectra {
  std::vector<double> wavelengths_nm;
  std::vector<double> forward;
  std::vector<double> backward;
  std::vector<double> forward_backward;
  std::vector<PixelStatus> status;

  const std::vector<double>& rates(DetectionScheme s) const {
    switch (s) {
      case DetectionScheme::forward: return forward;
      case DetectionScheme::backward: return backward;
      case DetectionScheme::forward_backward: return forward_backward;
    }
    return forward;
  }
};

/// Simplified-model spectra at theta = 0 weighted by envelope(lambda_s) *
/// envelope(lambda_i). Backward rates are scaled by `efficiency_ratio`
/// (eta_f/eta_b) and split-direction rates by its square root.
inline DetectionSpectra detection_spectra(const SweepSetup& setup, const std::vector<double>& wavelengths_nm,
                                          const EnvelopeModel& envelope, double efficiency_ratio,
                                          int threads = 1) {
  validate(envelope);
  if (!(efficiency_ratio > 0.0)) throw std::invalid_argument("efficiency ratio must be > 0");
  const SweepContext ctx(setup);
  const std::size_t n = wavelengths_nm.size();
  DetectionSpectra d;
  d.wavelengths_nm = wavelengths_nm;
  d.forward.assign(n, 0.0);
  d.backward.assign(n, 0.0);
  d.forward_backward.assign(n, 0.0);
  d.status.assign(n, PixelStatus::ok);

  parallel_for(n, threads, [&](std::size_t i) {
    const double ls = wavelengths_nm[i];
    PixelValues px = ctx.evaluate(ls, 0.0, Model::simplified);
    d.status[i] = px.status;
    if (px.status != PixelStatus::ok) return;
    const double li = setup.pump_wavelength_nm * ls / (ls - setup.pump_wavelength_nm);
    const double weight = envelope(ls) * envelope(li);
    d.forward[i] = px[Scheme::ff] * weight;
    d.backward[i] = px[Scheme::bb] * weight;
    d.forward_backward[i] = (px[Scheme::fb] + px[Scheme::bf]) * weight;
  });

  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (d.status[i] == PixelStatus::ok) peak = std::max(peak, d.forward[i]);
  if (!(peak > 0.0)) throw UndefinedStatisticError("forward detection spectrum is identically zero");
  const double split = std::sqrt(efficiency_ratio);
  for (std::size_t i = 0; i < n; ++i) {
    d.forward[i] = d.forward[i] / peak;
    d.backward[i] = (d.backward[i] / peak) * efficiency_ratio;
    d.forward_backward[i] = (d.forward_backward[i] / peak) * split;
  }
  return d;
}

inline std::vector<double> detection_spectrum(const SweepSetup& setup, const std::vector<double>& wavelengths_nm,
                                              DetectionScheme scheme, const EnvelopeModel& envelope,
                                              double efficiency_ratio, int threads = 1) {
  return detection_spectra(setup, wavelengths_nm, envelope, efficiency_ratio, threads).rates(scheme);
}

/// Linear Airy transmission over a (wavelength, angle) grid, row-major.
inline std::vector<double> transmission_grid(const LayerStack& stack, const GridAxes& axes,
                                             Polarization pol, std::vector<PixelStatus>* status = nullptr,
                                             int threads = 1) {
  const std::size_t n = axes.wavelengths_nm.size() * axes.angles_rad.size();
  std::vector<double> out(n, 0.0);
  std::vector<PixelStatus> st(n, PixelStatus::ok);
  parallel_for(n, threads, [&](std::size_t idx) {
    const std::size_t i = idx / axes.angles_rad.size(), j = idx % axes.angles_rad.size();
    try {
      out[idx] = linear_transmission(stack, {axes.wavelengths_nm[i], axes.angles_rad[j], pol, WaveRole::signal});
    } catch (const RangeError&) {
      st[idx] = PixelStatus::out_of_range;
    } catch (const GeometryError&) {
      st[idx] = PixelStatus::grazing;
    } catch (const ResonancePoleError&) {
      st[idx] = PixelStatus::resonance_pole;
    }
  });
  if (status) *status = std::move(st);
  return out;
}

}  // namespace spdc
