// Scattering-matrix model of pair generation in a nonlinear etalon.
//
// Mode ordering follows A = {a1, a2^dagger, a3, a4^dagger}: a1/a3 are the
// forward/backward signal modes, a2/a4 the forward/backward idler modes. The
// idler entries are stored Hermitian-conjugated, so their coefficients enter
// the boundary matrices conjugated.
#pragma once

#include <spdc/errors.hpp>
#include <spdc/layerstack.hpp>
#include <spdc/materials.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace spdc {

using FourMatrix = Eigen::Matrix<cdouble, 4, 4>;

struct InteractionParams {
  cdouble beta_plus;   ///< parametric interaction term, forward pump
  cdouble beta_minus;  ///< parametric interaction term, backward pump
  cdouble gamma_plus;
  cdouble gamma_minus;
  double phase_mismatch = 0.0;         ///< L * delta_k_parallel
  double delta_k_parallel = 0.0;       ///< rad/nm
  double delta_k_perpendicular = 0.0;  ///< rad/nm
};

/// In-film forward/backward pump field amplitudes, V/m.
struct PumpFieldAmplitudes {
  cdouble forward;
  cdouble backward;
};

/// gamma = (|beta|^2 - Delta^2/4)^{1/2}, principal branch (Re >= 0, and
/// Im >= 0 when purely imaginary). All matrix entries are even in gamma.
inline cdouble gain_term(const cdouble& beta, double phase_mismatch) {
  return std::sqrt(cdouble(std::norm(beta) - 0.25 * phase_mismatch * phase_mismatch, 0.0));
}

namespace detail {

struct MismatchGeometry {
  double delta_k_parallel;
  double delta_k_perpendicular;
  double k_signal_parallel;
  double k_idler_parallel;
};

inline MismatchGeometry mismatch_geometry(const LayerStack& stack, const Mode& pump,
                                          const Mode& signal, const Mode& idler) {
  for (const Mode* m : {&pump, &signal, &idler}) {
    validate(*m);
    if (std::abs(m->internal_angle) > grazing_limit)
      throw GeometryError("mode at grazing incidence inside the film");
  }
  const auto kp = wavevector_components(pump, refractive_index(stack.film, pump.wavelength_nm));
  const auto ks = wavevector_components(signal, refractive_index(stack.film, signal.wavelength_nm));
  const auto ki = wavevector_components(idler, refractive_index(stack.film, idler.wavelength_nm));
  if (!(ks.parallel > 0.0) || !(ki.parallel > 0.0))
    throw GeometryError("signal or idler has no forward wavevector component");
  return {kp.parallel - ks.parallel - ki.parallel,
          kp.perpendicular - ks.perpendicular - ki.perpendicular, ks.parallel, ki.parallel};
}

inline InteractionParams assemble(const LayerStack& stack, const MismatchGeometry& g,
                                  cdouble beta_plus, cdouble beta_minus) {
  InteractionParams p;
  p.delta_k_parallel = g.delta_k_parallel;
  p.delta_k_perpendicular = g.delta_k_perpendicular;
  p.phase_mismatch = stack.thickness_nm * g.delta_k_parallel;
  p.beta_plus = beta_plus;
  p.beta_minus = beta_minus;
  p.gamma_plus = gain_term(beta_plus, p.phase_mismatch);
  p.gamma_minus = gain_term(beta_minus, p.phase_mismatch);
  return p;
}

}  // namespace detail

/// Interaction parameters with beta derived from chi2 and the in-film pump
/// amplitudes:
///   beta = 2 pi w_s w_i chi2 L E0 / (c^2 sqrt(k_s k_i)).
/// Requires stack.chi2_pm_per_V.
inline InteractionParams interaction_params(const LayerStack& stack, const Mode& pump,
                                            const Mode& signal, const Mode& idler,
                                            const PumpFieldAmplitudes& fields) {
  if (!stack.chi2_pm_per_V)
    throw std::invalid_argument("interaction_params: layer stack has no chi2 value");
  const auto g = detail::mismatch_geometry(stack, pump, signal, idler);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  // w/c = 2 pi / lambda; chi2 pm/V -> nm/V, field V/m -> V/nm.
  const double coupling = two_pi * (two_pi / signal.wavelength_nm) * (two_pi / idler.wavelength_nm) *
                          (*stack.chi2_pm_per_V * 1e-3) * stack.thickness_nm * 1e-9 /
                          std::sqrt(g.k_signal_parallel * g.k_idler_parallel);
  return detail::assemble(stack, g, coupling * fields.forward, coupling * fields.backward);
}

/// Interaction parameters with beta supplied directly.
inline InteractionParams interaction_params_from_beta(const LayerStack& stack, const Mode& pump,
                                                      const Mode& signal, const Mode& idler,
                                                      cdouble beta_plus, cdouble beta_minus) {
  return detail::assemble(stack, detail::mismatch_geometry(stack, pump, signal, idler), beta_plus,
                          beta_minus);
}

namespace detail {

inline constexpr double sinhc_series_radius = 1e-4;

/// sinh(z)/z, with a series near the origin.
inline cdouble sinhc(const cdouble& z) {
  if (std::abs(z) < sinhc_series_radius) {
    const cdouble z2 = z * z;
    return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

inline Eigen::Matrix<cdouble, 2, 2> interaction_block(const cdouble& beta, const cdouble& gamma,
                                                      double delta) {
  Eigen::Matrix<cdouble, 2, 2> b;
  if (beta == cdouble(0.0)) {
    b.setIdentity();
    return b;
  }
  const cdouble i(0.0, 1.0);
  const cdouble sc = sinhc(gamma);
  const cdouble ch = std::cosh(gamma);
  b(0, 0) = std::exp(-i * (delta / 2)) * (ch + i * (delta / 2) * sc);
  b(1, 1) = std::exp(i * (delta / 2)) * (ch - i * (delta / 2) * sc);
  b(0, 1) = -i * beta * sc;
  b(1, 0) = i * std::conj(beta) * sc;
  return b;
}

}  // namespace detail

/// Block-diagonal interaction matrix: the (+) block couples a1/a2^dagger, the
/// (-) block a3/a4^dagger.
inline FourMatrix interaction_matrix(const InteractionParams& p) {
  FourMatrix w = FourMatrix::Zero();
  w.block<2, 2>(0, 0) = detail::interaction_block(p.beta_plus, p.gamma_plus, p.phase_mismatch);
  w.block<2, 2>(2, 2) = detail::interaction_block(p.beta_minus, p.gamma_minus, p.phase_mismatch);
  return w;
}

struct BoundaryMatrices {
  FourMatrix tau1;
  FourMatrix tau2;
  FourMatrix rho;
};

inline BoundaryMatrices boundary_matrices(const InterfaceCoeffs& s, const InterfaceCoeffs& i,
                                          double phase_s, double phase_i) {
  BoundaryMatrices m;
  m.tau1 = FourMatrix::Zero();
  m.tau2 = FourMatrix::Zero();
  m.rho = FourMatrix::Zero();
  m.tau1.diagonal() << s.t1, std::conj(i.t1), s.t2, std::conj(i.t2);
  m.tau2.diagonal() << s.t2, std::conj(i.t2), s.t1, std::conj(i.t1);
  const cdouble es = std::exp(cdouble(0.0, phase_s));
  const cdouble ei = std::exp(cdouble(0.0, -phase_i));
  m.rho(0, 2) = s.r1 * es;
  m.rho(1, 3) = std::conj(i.r1) * ei;
  m.rho(2, 0) = s.r2 * es;
  m.rho(3, 1) = std::conj(i.r2) * ei;
  return m;
}

inline constexpr double max_condition_number = 1e12;

/// U = tau2 w (I - rho w)^{-1} tau1 - rho^dagger, via an LU solve.
/// Throws SingularSystemError when cond(I - rho w) exceeds 1e12.
inline FourMatrix scattering_matrix(const FourMatrix& w, const FourMatrix& tau1,
                                    const FourMatrix& tau2, const FourMatrix& rho) {
  const FourMatrix a = FourMatrix::Identity() - rho * w;
  const Eigen::PartialPivLU<FourMatrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond * max_condition_number > 1.0))
    throw SingularSystemError("I - rho w is near-singular (parametric oscillation threshold)");
  const FourMatrix x = lu.solve(tau1);
  return tau2 * w * x - rho.adjoint();
}

/// Relative probabilities of the four emission schemes.
struct PairProbabilities {
  double ff = 0.0;
  double bb = 0.0;
  double fb = 0.0;
  double bf = 0.0;
};

/// Vacuum expectation values of the detected pair for each scheme. `first`
/// is the signal row (1 forward, 3 backward) and `second` the idler row (2
/// forward, 4 backward), 1-based.
inline double pair_moment(const FourMatrix& U, int first, int second) {
  auto u = [&](int r, int c) { return U(r - 1, c - 1); };
  const int s = first, q = second;
  const double v = std::norm(u(q, 1)) * (std::norm(u(s, 1)) + std::norm(u(s, 2)) + std::norm(u(s, 4))) +
                   std::norm(u(q, 3)) * (std::norm(u(s, 3)) + std::norm(u(s, 2)) + std::norm(u(s, 4))) +
                   2.0 * std::real(u(s, 1) * u(q, 3) * std::conj(u(q, 1)) * std::conj(u(s, 3)));
  return std::max(v, 0.0);
}

inline PairProbabilities pair_probabilities(const FourMatrix& U) {
  return {pair_moment(U, 1, 2), pair_moment(U, 3, 4), pair_moment(U, 1, 4), pair_moment(U, 3, 2)};
}

}  // namespace spdc
