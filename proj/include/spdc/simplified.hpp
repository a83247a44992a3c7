// Low-gain multiplicative model: P_res = P x S.
//
// P is the pair spectrum of the bare nonlinear film (phase matching times the
// pump transverse profile); S is the etalon filter built from the
// out-coupling amplitudes of signal and idler.
#pragma once

#include <spdc/layerstack.hpp>
#include <spdc/rigorous.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace spdc {

struct PumpProfile {
  double waist_diameter_um = 0.0;  ///< 1/e^2 diameter
  double wavelength_nm = 0.0;
  cdouble beta_scale;              ///< in-film forward beta when supplied directly
};

enum class Scheme { ff, bb, fb, bf };

inline constexpr std::array<Scheme, 4> all_schemes = {Scheme::ff, Scheme::bb, Scheme::fb, Scheme::bf};

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::ff: return "ff";
    case Scheme::bb: return "bb";
    case Scheme::fb: return "fb";
    case Scheme::bf: return "bf";
  }
  return "?";
}

inline double sinc(double x) {
  return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

/// |F_pm F_p|^2 = sinc^2(dk_par L / 2) exp(-(dk_perp w)^2 / 2).
inline double nonresonant_probability(double delta_k_parallel, double delta_k_perpendicular,
                                      double thickness_nm, double waist_um) {
  if (!(thickness_nm > 0.0) || !(waist_um > 0.0))
    throw std::invalid_argument("nonresonant_probability: thickness and waist must be > 0");
  const double s = sinc(0.5 * delta_k_parallel * thickness_nm);
  const double kw = delta_k_perpendicular * waist_um * 1e3;
  return s * s * std::exp(-0.5 * kw * kw);
}

/// First-order expansion of the interaction matrix: unit diagonal and
/// off-diagonals -i beta sinc(Delta/2), +i conj(beta) sinc(Delta/2).
inline FourMatrix low_gain_interaction_matrix(const InteractionParams& p) {
  const cdouble i(0.0, 1.0);
  const double s = sinc(0.5 * p.phase_mismatch);
  FourMatrix w = FourMatrix::Identity();
  w(0, 1) = -i * p.beta_plus * s;
  w(1, 0) = i * std::conj(p.beta_plus) * s;
  w(2, 3) = -i * p.beta_minus * s;
  w(3, 2) = i * std::conj(p.beta_minus) * s;
  return w;
}

/// Etalon filter for one emission scheme. `signal` supplies a1/a3, `idler`
/// supplies a2/a4.
inline double filter_function(Scheme scheme, cdouble beta_plus, cdouble beta_minus,
                              const FieldEnhancements& signal, const FieldEnhancements& idler) {
  const bool signal_fwd = scheme == Scheme::ff || scheme == Scheme::fb;
  const bool idler_fwd = scheme == Scheme::ff || scheme == Scheme::bf;
  const cdouble sp = signal_fwd ? signal.forward_plus : signal.backward_plus;
  const cdouble sm = signal_fwd ? signal.forward_minus : signal.backward_minus;
  const cdouble ip = idler_fwd ? idler.forward_plus : idler.backward_plus;
  const cdouble im = idler_fwd ? idler.forward_minus : idler.backward_minus;
  return std::norm(beta_plus * sp * ip + beta_minus * sm * im);
}

inline double simplified_probability(double nonresonant, double filter) {
  return nonresonant * filter;
}

}  // namespace spdc
