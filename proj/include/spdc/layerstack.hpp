// Three-region etalon: superstrate / nonlinear film / substrate.
//
// The pump enters from the superstrate along +z. Interface 1 separates the
// superstrate and the film, interface 2 the film and the substrate.
#pragma once

#include <spdc/errors.hpp>
#include <spdc/materials.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

namespace spdc {

using cdouble = std::complex<double>;

struct LayerStack {
  MaterialModel superstrate;
  MaterialModel film;
  MaterialModel substrate;
  double thickness_nm = 0.0;
  std::optional<double> chi2_pm_per_V;  ///< only needed when beta is derived from fields
};

inline void validate(const LayerStack& s) {
  if (!(s.thickness_nm > 0.0) || !std::isfinite(s.thickness_nm))
    throw std::invalid_argument("layer stack thickness must be > 0");
  validate(s.superstrate);
  validate(s.film);
  validate(s.substrate);
}

/// Raw single-interface Fresnel amplitudes (field ratios).
struct FresnelCoeffs {
  cdouble r;
  cdouble t;
};

namespace detail {

struct InterfaceAmplitudes {
  cdouble r;
  cdouble t;       ///< raw field transmission
  cdouble t_flux;  ///< photon-flux normalised transmission, 0 when evanescent
  cdouble cos_out;
};

// Positive-decay branch of the transmitted cosine: Im(cos_out) >= 0.
inline InterfaceAmplitudes interface_amplitudes(double n_in, double n_out, cdouble cos_in,
                                                Polarization pol) {
  const double ratio = n_in / n_out;
  const cdouble sin2_out = ratio * ratio * (1.0 - cos_in * cos_in);
  cdouble cos_out = std::sqrt(cdouble(1.0) - sin2_out);
  if (cos_out.imag() < 0.0) cos_out = -cos_out;

  const cdouble a = n_in * cos_in;
  const cdouble b = n_out * cos_out;
  InterfaceAmplitudes out;
  out.cos_out = cos_out;
  if (pol == Polarization::s) {
    const cdouble den = a + b;
    out.r = (a - b) / den;
    out.t = 2.0 * a / den;
  } else {
    const cdouble ap = n_out * cos_in;
    const cdouble bp = n_in * cos_out;
    const cdouble den = ap + bp;
    out.r = (ap - bp) / den;
    out.t = 2.0 * a / den;
  }
  const double flux_ratio = b.real() / a.real();
  out.t_flux = flux_ratio > 0.0 ? out.t * std::sqrt(flux_ratio) : cdouble(0.0);
  return out;
}

}  // namespace detail

/// Single-interface amplitudes for a wave travelling from n_in into n_out.
/// Beyond the critical angle the transmitted cosine is imaginary and |r| = 1.
inline FresnelCoeffs fresnel(double n_in, double n_out, double incidence_angle,
                             Polarization polarization) {
  const auto a = detail::interface_amplitudes(n_in, n_out, std::cos(incidence_angle), polarization);
  return {a.r, a.t};
}

/// Interface coefficients for one mode, seen from inside the film.
///
/// r1, r2 are the internal reflections at interfaces 1 and 2 (a symmetric
/// slab has r1 == r2). t1, t2 are flux-normalised, so they are the same for
/// either crossing direction and the external reflection is -conj(r).
struct InterfaceCoeffs {
  cdouble t1, r1, t2, r2;
};

inline InterfaceCoeffs interface_coeffs(const LayerStack& stack, const Mode& mode) {
  validate(mode);
  const double nf = refractive_index(stack.film, mode.wavelength_nm);
  const double n1 = refractive_index(stack.superstrate, mode.wavelength_nm);
  const double n3 = refractive_index(stack.substrate, mode.wavelength_nm);
  const cdouble c = std::cos(mode.internal_angle);
  const auto i1 = detail::interface_amplitudes(nf, n1, c, mode.polarization);
  const auto i2 = detail::interface_amplitudes(nf, n3, c, mode.polarization);
  return {i1.t_flux, i1.r, i2.t_flux, i2.r};
}

/// Single-pass phase L k_parallel.
inline double propagation_phase(const LayerStack& stack, const Mode& mode) {
  const double n = refractive_index(stack.film, mode.wavelength_nm);
  return stack.thickness_nm * wavevector_components(mode, n).parallel;
}

namespace detail {

inline constexpr double pole_tolerance = 1e-9;

inline cdouble round_trip_denominator(const cdouble& r1, const cdouble& r2, double phase) {
  const cdouble d = 1.0 - r1 * r2 * std::exp(cdouble(0.0, 2.0 * phase));
  if (std::abs(d) < pole_tolerance)
    throw ResonancePoleError("etalon round-trip denominator vanishes (|1 - r1 r2 e^{2i phi}| < 1e-9)");
  return d;
}

}  // namespace detail

/// Forward and backward pump amplitudes inside the film relative to the
/// incident amplitude E0.
struct PumpFieldRatios {
  cdouble forward;   ///< E0(+)/E0
  cdouble backward;  ///< E0(-)/E0 = r2 exp(i phi) E0(+)/E0
};

inline PumpFieldRatios pump_enhancement(const InterfaceCoeffs& coeffs, double phase_p) {
  const cdouble d = detail::round_trip_denominator(coeffs.r1, coeffs.r2, phase_p);
  const cdouble forward = coeffs.t1 / d;
  return {forward, coeffs.r2 * std::exp(cdouble(0.0, phase_p)) * forward};
}

/// Etalon-enhanced out-coupling amplitudes of one down-converted mode.
/// For the signal these are a1(+-), a3(+-); for the idler a2(+-), a4(+-).
struct FieldEnhancements {
  cdouble forward_plus;    ///< a1/a2 (+): exits forward, generated by the forward pump
  cdouble forward_minus;   ///< a1/a2 (-)
  cdouble backward_plus;   ///< a3/a4 (+)
  cdouble backward_minus;  ///< a3/a4 (-)
};

inline FieldEnhancements field_enhancements(const InterfaceCoeffs& c, double phase) {
  const cdouble d = detail::round_trip_denominator(c.r1, c.r2, phase);
  const cdouble e = std::exp(cdouble(0.0, phase));
  return {c.t2 / d, c.r1 * c.t2 * e / d, c.r2 * c.t1 * e / d, c.t1 / d};
}

/// Airy power transmission of the stack for a wave entering from the
/// superstrate, with the film-internal angle taken from the mode. Returns 0
/// if either outer medium cannot carry a propagating wave at that angle.
inline double linear_transmission(const LayerStack& stack, const Mode& mode) {
  validate(mode);
  const double nf = refractive_index(stack.film, mode.wavelength_nm);
  const double n1 = refractive_index(stack.superstrate, mode.wavelength_nm);
  const double n3 = refractive_index(stack.substrate, mode.wavelength_nm);
  const cdouble c = std::cos(mode.internal_angle);
  const auto inside1 = detail::interface_amplitudes(nf, n1, c, mode.polarization);
  const auto inside2 = detail::interface_amplitudes(nf, n3, c, mode.polarization);
  if (inside1.cos_out.imag() != 0.0 || inside2.cos_out.imag() != 0.0) return 0.0;

  const auto entry = detail::interface_amplitudes(n1, nf, inside1.cos_out, mode.polarization);
  const double phi = propagation_phase(stack, mode);
  const cdouble d = detail::round_trip_denominator(inside1.r, inside2.r, phi);
  const cdouble amp = entry.t * inside2.t * std::exp(cdouble(0.0, phi)) / d;
  const double flux = (n3 * inside2.cos_out.real()) / (n1 * inside1.cos_out.real());
  return std::norm(amp) * flux;
}

}  // namespace spdc
