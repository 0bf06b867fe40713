#pragma once

#include <string>

#include "ipf/errors.hpp"
#include "ipf/netlist.hpp"

namespace ipf {

// =============================================================================
// Discretized transmission line: an independent oracle for the exact line
// stamp. Each of the N sections is a symmetric T (L/2N - C/N - L/2N), which
// converges to the exact line at second order in 1/N.
// =============================================================================

/// Append an N-section LC ladder between two existing nodes. Total series
/// inductance is Z0*theta_ref/omega_ref and total shunt capacitance is
/// theta_ref/(Z0*omega_ref), split uniformly over the sections.
inline void append_discretized_line(Netlist& nl, NodeId a, NodeId b, double z0_ohm,
                                    double theta_ref_rad, double omega_ref,
                                    int sections, const std::string& prefix = "lad") {
  if (sections < 1) throw InvalidNetlist("discretize_line requires N >= 1");
  if (!(z0_ohm > 0.0) || !(theta_ref_rad > 0.0) || !(omega_ref > 0.0))
    throw InvalidNetlist("discretize_line requires positive Z0, theta_ref, omega_ref");

  const double l_total = z0_ohm * theta_ref_rad / omega_ref;
  const double c_total = theta_ref_rad / (z0_ohm * omega_ref);
  const double l_half = 0.5 * l_total / sections;
  const double c_sec = c_total / sections;

  NodeId left = a;
  for (int i = 0; i < sections; ++i) {
    const NodeId mid = nl.add_node(prefix + "_m" + std::to_string(i));
    const NodeId right =
        (i == sections - 1) ? b : nl.add_node(prefix + "_j" + std::to_string(i));
    nl.add_inductor(left, mid, l_half);
    nl.add_capacitor(mid, ground_node, c_sec);
    nl.add_inductor(mid, right, l_half);
    left = right;
  }
}

/// Stand-alone ladder fragment with boundary nodes "a" and "b".
inline Netlist discretize_line(double z0_ohm, double theta_ref_rad, double omega_ref,
                               int sections) {
  Netlist nl;
  const NodeId a = nl.add_node("a");
  const NodeId b = nl.add_node("b");
  append_discretized_line(nl, a, b, z0_ohm, theta_ref_rad, omega_ref, sections);
  return nl;
}

}  // namespace ipf
