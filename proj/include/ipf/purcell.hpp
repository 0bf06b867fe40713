#pragma once

#include <cmath>
#include <complex>

#include "ipf/constants.hpp"
#include "ipf/errors.hpp"

namespace ipf {

// =============================================================================
// Analytic relaxation-rate models for a transmon read out through a detuned
// lossy resonator, plus the parameter conversions between (g, g0, chi, alpha,
// omega_q, omega_r). All rates and frequencies are angular [rad/s]; the
// reporting layer divides by 2 pi.
// =============================================================================

/// Readout-chain parameters. kappa is the effective resonator linewidth,
/// g0 the on-resonance qubit-resonator coupling, alpha the (negative)
/// transmon anharmonicity and e_c the charging energy, all angular.
struct ReadoutParams {
  double omega_r = 0.0;
  double kappa = 0.0;
  double g0 = 0.0;
  double alpha = 0.0;
  double e_c = 0.0;
  double z0_ohm = 50.0;
};

struct QubitPoint {
  double omega_q = 0.0;
  double c_sigma_f = 0.0;  // total island capacitance
  double delta(double omega_r) const { return omega_q - omega_r; }
};

struct DecayRate {
  double gamma = 0.0;  // rad/s
  double t1() const {
    if (gamma <= 0.0) throw DivisionByZero("T1 undefined for gamma <= 0");
    return 1.0 / gamma;
  }
};

enum class UnfilteredVariant { Exact, Approx, Standard };

/// Coupling at a general qubit frequency; capacitive coupling scales as
/// g = g0 sqrt(omega_q / omega_r).
inline double g_of_omega(double g0, double omega_q, double omega_r) {
  return g0 * std::sqrt(omega_q / omega_r);
}

namespace detail {
inline void require_detuned(double omega_q, double omega_r) {
  if (!(std::abs(omega_q - omega_r) > 1e-12 * omega_r))
    throw ZeroDetuning("qubit and resonator frequencies coincide");
}
}  // namespace detail

/// Decay rate of a qubit capacitively coupled to a detuned lossy single-mode
/// resonator with no filter present.
///
///   exact    kappa (g/Delta)^2 (wq/wr)^3 (2wq/(wq+wr))^2
///   approx   kappa (g/Delta)^2 (wq/wr)^4
///   standard kappa (g/Delta)^2
inline DecayRate unfiltered_gamma(const ReadoutParams& p, double omega_q,
                                  UnfilteredVariant variant) {
  detail::require_detuned(omega_q, p.omega_r);
  const double g = g_of_omega(p.g0, omega_q, p.omega_r);
  const double delta = omega_q - p.omega_r;
  const double base = p.kappa * (g / delta) * (g / delta);
  const double x = omega_q / p.omega_r;
  switch (variant) {
    case UnfilteredVariant::Standard:
      return {base};
    case UnfilteredVariant::Approx:
      return {base * x * x * x * x};
    case UnfilteredVariant::Exact:
    default: {
      const double lobe = 2.0 * omega_q / (omega_q + p.omega_r);
      return {base * x * x * x * lobe * lobe};
    }
  }
}

/// Factor by which the standard expression overestimates the exact decay:
/// [(wq/wr)^3 (2wq/(wq+wr))^2]^-1.
inline double overestimation_factor(double omega_q, double omega_r) {
  detail::require_detuned(omega_q, omega_r);
  const double x = omega_q / omega_r;
  const double lobe = 2.0 * omega_q / (omega_q + omega_r);
  return 1.0 / (x * x * x * lobe * lobe);
}

/// Classical decay rate from the admittance seen by the junction:
/// Gamma_P = Re[Y_in] / C_sigma. Real parts in [-1e-12, 0) S are treated as
/// solver noise and clamped to zero; anything more negative signals a
/// non-passive netlist.
inline DecayRate gamma_from_admittance(Complex y_in, double c_sigma_f) {
  if (!(c_sigma_f > 0.0)) throw Error("c_sigma must be positive");
  double re = y_in.real();
  if (re < 0.0) {
    if (re < -1e-12)
      throw NegativeRealAdmittance("Re[Y_in] = " + std::to_string(re) +
                                   " S below passivity tolerance");
    re = 0.0;
  }
  return {re / c_sigma_f};
}

/// Dispersive shift of a transmon: chi = g^2 alpha / [Delta (Delta + alpha)].
inline double chi_from_g(double g, double alpha, double delta) {
  if (delta == 0.0 || delta + alpha == 0.0)
    throw PoleDetuning("dispersive formula undefined at Delta = 0 or Delta = -alpha");
  return g * g * alpha / (delta * (delta + alpha));
}

struct CouplingFromChi {
  double g = 0.0;   // at omega_q
  double g0 = 0.0;  // on resonance
};

/// Invert the transmon dispersive shift for the coupling strength:
/// g = sqrt(chi Delta (Delta + alpha) / alpha), then g0 = g / sqrt(wq/wr).
inline CouplingFromChi g_from_chi(double chi, double alpha, double omega_q,
                                  double omega_r) {
  const double delta = omega_q - omega_r;
  if (delta == 0.0 || delta + alpha == 0.0)
    throw PoleDetuning("dispersive formula undefined at Delta = 0 or Delta = -alpha");
  if (chi == 0.0) return {0.0, 0.0};
  if ((delta > 0.0) != (delta + alpha > 0.0))
    throw StraddlePole("Delta and Delta + alpha straddle the dispersive pole");
  if (!(chi * alpha > 0.0))
    throw UnsolvableSign("chi and alpha must share a sign for a real coupling");
  const double g2 = chi * delta * (delta + alpha) / alpha;
  const double g = std::sqrt(g2);
  return {g, g / std::sqrt(omega_q / omega_r)};
}

/// Total transmon island capacitance from the charging energy (angular):
/// C_sigma = e^2 / (2 hbar E_C).
inline double csigma_from_ec(double e_c) {
  if (!(e_c > 0.0)) throw Error("E_C must be positive");
  return elementary_charge * elementary_charge / (2.0 * hbar * e_c);
}

/// Ratio of unfiltered to filtered decay; the caller holds (wq, wr, g0,
/// alpha, kappa) identical between the two evaluations.
inline double suppression_factor(DecayRate unfiltered, DecayRate filtered) {
  if (!(filtered.gamma > 0.0))
    throw DivisionByZero("suppression undefined for non-positive filtered rate");
  return unfiltered.gamma / filtered.gamma;
}

}  // namespace ipf
