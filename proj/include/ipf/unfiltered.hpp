#pragma once

#include <cmath>
#include <string>

#include "ipf/constants.hpp"
#include "ipf/errors.hpp"
#include "ipf/netlist.hpp"
#include "ipf/network.hpp"
#include "ipf/purcell.hpp"

namespace ipf {

// =============================================================================
// Unfiltered readout circuit: qubit island (C_q) coupled through C_g to a
// lumped resonator tank (L_r, C_r) whose feedline decay is modeled by a
// series C_k into an environment resistance R_e. The element formulas tying
// (L_r, C_r, C_k, C_g) to (omega_r, g0, kappa) are
//
//   omega_r = 1 / sqrt(L_r (C_r + C_k + C_g))
//   g       = (C_g / 2) sqrt(wq wr) / sqrt((C_q + C_g)(C_r + C_k + C_g))
//   kappa   = (R_e / L_r) (C_k / (C_r + C_k + C_g))^2
//
// The tank capacitance budget is pinned to the quarter-wave equivalent
// pi / (4 Z0 omega_r) of a Z0 resonator.
// =============================================================================

struct ReadoutTargets {
  double omega_r = 0.0;  // rad/s
  double g0 = 0.0;       // rad/s
  double kappa = 0.0;    // rad/s
};

struct UnfilteredFixed {
  double c_q_f = 0.0;
  double r_e_ohm = 50.0;
  double z0_ohm = 50.0;  // sets the tank capacitance budget
};

struct ReadoutDesign {
  ReadoutTargets targets;
  double c_q_f = 0.0;
  double r_e_ohm = 0.0;
  double l_r_h = 0.0;
  double c_r_f = 0.0;
  double c_k_f = 0.0;
  double c_g_f = 0.0;

  double c_tank() const { return c_r_f + c_k_f + c_g_f; }
  double c_sigma() const { return c_q_f + c_g_f; }

  double realized_omega_r() const { return 1.0 / std::sqrt(l_r_h * c_tank()); }
  double realized_g0() const {
    return 0.5 * c_g_f * realized_omega_r() /
           std::sqrt((c_q_f + c_g_f) * c_tank());
  }
  double realized_kappa() const {
    const double frac = c_k_f / c_tank();
    return r_e_ohm / l_r_h * frac * frac;
  }

  Netlist netlist;
  std::size_t probe_port = 0;
};

namespace detail {

/// C_g satisfying the coupling formula at fixed C_q and tank capacitance.
inline double solve_cg(double g0, double omega_r, double c_q, double c_tank) {
  // g0 = Cg wr / (2 sqrt((Cq+Cg) Ct))  =>  Cg^2 wr^2 - 4 g0^2 Ct Cg - 4 g0^2 Ct Cq = 0
  const double w2 = omega_r * omega_r;
  const double disc = g0 * g0 * c_tank * c_tank + w2 * c_tank * c_q;
  return (2.0 * g0 * g0 * c_tank + 2.0 * g0 * std::sqrt(disc)) / w2;
}

}  // namespace detail

/// Realize the tank elements for the requested (omega_r, g0, kappa) at fixed
/// island capacitance C_q and environment R_e. Iterates the coupled element
/// equations with damping until the realized triple matches the targets to
/// 0.1% (normally one pass, since the inversions are exact at fixed budget).
inline ReadoutDesign build_unfiltered_netlist(const ReadoutTargets& t,
                                              const UnfilteredFixed& fixed) {
  if (!(t.omega_r > 0.0) || !(t.g0 > 0.0) || t.kappa < 0.0)
    throw Error("unfiltered design requires omega_r, g0 > 0 and kappa >= 0");
  if (!(fixed.c_q_f > 0.0) || !(fixed.r_e_ohm > 0.0))
    throw Error("unfiltered design requires C_q, R_e > 0");

  const double c_tank = pi / (4.0 * fixed.z0_ohm * t.omega_r);

  double c_g = 0.0, c_k = 0.0, c_r = 0.0, l_r = 0.0;
  bool converged = false;
  for (int iter = 0; iter < 1000; ++iter) {
    const double c_g_new = detail::solve_cg(t.g0, t.omega_r, fixed.c_q_f, c_tank);
    c_g = (iter == 0) ? c_g_new : 0.5 * (c_g + c_g_new);  // damped
    c_k = std::sqrt(t.kappa * c_tank / fixed.r_e_ohm) / t.omega_r;
    c_r = c_tank - c_k - c_g;
    l_r = 1.0 / (t.omega_r * t.omega_r * c_tank);
    if (c_r <= 0.0)
      throw NonConvergence("coupling capacitors exceed the tank budget");

    ReadoutDesign probe;
    probe.c_q_f = fixed.c_q_f;
    probe.r_e_ohm = fixed.r_e_ohm;
    probe.l_r_h = l_r;
    probe.c_r_f = c_r;
    probe.c_k_f = c_k;
    probe.c_g_f = c_g;
    const double dw = std::abs(probe.realized_omega_r() - t.omega_r) / t.omega_r;
    const double dg = std::abs(probe.realized_g0() - t.g0) / t.g0;
    const double dk = t.kappa > 0.0
                          ? std::abs(probe.realized_kappa() - t.kappa) / t.kappa
                          : std::abs(probe.realized_kappa());
    if (dw < 1e-3 && dg < 1e-3 && dk < 1e-3) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergence("unfiltered element solve did not reach 0.1% in 1000 iterations");

  ReadoutDesign d;
  d.targets = t;
  d.c_q_f = fixed.c_q_f;
  d.r_e_ohm = fixed.r_e_ohm;
  d.l_r_h = l_r;
  d.c_r_f = c_r;
  d.c_k_f = c_k;
  d.c_g_f = c_g;

  Netlist& nl = d.netlist;
  const NodeId q = nl.add_node("q");
  const NodeId r = nl.add_node("r");
  nl.add_capacitor(q, ground_node, d.c_q_f, "Cq");
  nl.add_capacitor(q, r, d.c_g_f, "Cg");
  nl.add_inductor(r, ground_node, d.l_r_h, "Lr");
  nl.add_capacitor(r, ground_node, d.c_r_f, "Cr");
  if (d.c_k_f > 0.0) {
    const NodeId k = nl.add_node("k");
    nl.add_capacitor(r, k, d.c_k_f, "Ck");
    nl.add_resistor(k, ground_node, d.r_e_ohm, "Re");
  }
  d.probe_port = nl.add_port(q, ground_node, 50.0);
  return d;
}

/// Same, but with the island split C_sigma = C_q + C_g enforced for a given
/// charging energy: C_q is re-derived from C_sigma after each coupling solve.
inline ReadoutDesign realize_unfiltered_design(const ReadoutTargets& t, double e_c,
                                               double r_e_ohm = 50.0,
                                               double z0_ohm = 50.0) {
  const double c_sigma = csigma_from_ec(e_c);
  double c_q = c_sigma;
  for (int iter = 0; iter < 100; ++iter) {
    const ReadoutDesign d = build_unfiltered_netlist(t, UnfilteredFixed{c_q, r_e_ohm, z0_ohm});
    const double c_q_new = c_sigma - d.c_g_f;
    if (c_q_new <= 0.0)
      throw NonConvergence("coupling capacitor exceeds the island budget C_sigma");
    if (std::abs(c_q_new - c_q) < 1e-9 * c_sigma)
      return build_unfiltered_netlist(t, UnfilteredFixed{c_q_new, r_e_ohm, z0_ohm});
    c_q = 0.5 * (c_q + c_q_new);
  }
  throw NonConvergence("island split C_sigma = C_q + C_g did not converge");
}

/// Decay rate of the realized circuit at omega_q via the admittance route.
inline DecayRate circuit_gamma(const ReadoutDesign& d, double omega_q) {
  const Complex y = input_admittance(d.netlist, d.probe_port, omega_q);
  return gamma_from_admittance(y, d.c_sigma());
}

}  // namespace ipf
