#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "ipf/errors.hpp"
#include "ipf/mna.hpp"
#include "ipf/netlist.hpp"

namespace ipf {

// =============================================================================
// Port-level quantities: input admittance, Y- and S-matrices.
// =============================================================================

namespace detail {

/// Copy of the netlist with resistive terminations across every port except
/// `skip` (pass ports().size() to terminate all).
inline Netlist terminated(const Netlist& nl, std::size_t skip) {
  Netlist out = nl;
  for (std::size_t i = 0; i < nl.ports().size(); ++i) {
    if (i == skip) continue;
    const Port& p = nl.ports()[i];
    out.add_resistor(p.pos, p.neg, p.z0_ohm, "term" + std::to_string(i));
  }
  return out;
}

}  // namespace detail

/// Input admittance seen looking into port `port_index` with every other
/// port terminated in its reference impedance. The port's own external
/// termination is removed: the probe replaces whatever the port models.
inline Complex input_admittance(const Netlist& nl, std::size_t port_index, double omega) {
  if (port_index >= nl.ports().size())
    throw InvalidNetlist("input_admittance: port index out of range");
  Netlist probed = detail::terminated(nl, port_index);
  const Port& p = nl.ports()[port_index];
  const std::size_t src = probed.add_voltage_source(p.pos, p.neg, Complex{1.0, 0.0}, "probe");
  const ACSolution sol = solve_ac(probed, omega);
  // branch current is metered from + to - through the source, so the current
  // delivered into the network is its negative
  return -sol.i_branch(src);
}

struct TwoPortParams {
  Eigen::Matrix2cd y;
  Eigen::Matrix2cd s;
};

/// Convert a Y-matrix to S referenced to real port impedances z0.
inline Eigen::Matrix2cd y_to_s(const Eigen::Matrix2cd& y, double z0_1, double z0_2) {
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = std::sqrt(z0_1);
  d(1, 1) = std::sqrt(z0_2);
  const Eigen::Matrix2cd yn = d * y * d;
  const Eigen::Matrix2cd eye = Eigen::Matrix2cd::Identity();
  return (eye - yn) * (eye + yn).inverse();
}

/// Convert an S-matrix back to Y (inverse of y_to_s).
inline Eigen::Matrix2cd s_to_y(const Eigen::Matrix2cd& s, double z0_1, double z0_2) {
  Eigen::Matrix2cd dinv = Eigen::Matrix2cd::Zero();
  dinv(0, 0) = 1.0 / std::sqrt(z0_1);
  dinv(1, 1) = 1.0 / std::sqrt(z0_2);
  const Eigen::Matrix2cd eye = Eigen::Matrix2cd::Identity();
  return dinv * (eye + s).inverse() * (eye - s) * dinv;
}

/// Y- and S-parameters of a two-port netlist at angular frequency omega.
/// The netlist must declare exactly two ports.
inline TwoPortParams two_port_params(const Netlist& nl, double omega) {
  if (nl.ports().size() != 2)
    throw PortCountMismatch("two_port_params requires exactly 2 ports, got " +
                            std::to_string(nl.ports().size()));
  TwoPortParams out;
  for (int drive = 0; drive < 2; ++drive) {
    Netlist work = nl;
    std::array<std::size_t, 2> src{};
    for (int p = 0; p < 2; ++p) {
      const Port& port = nl.ports()[static_cast<std::size_t>(p)];
      const Complex v = (p == drive) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      src[static_cast<std::size_t>(p)] =
          work.add_voltage_source(port.pos, port.neg, v, "probe" + std::to_string(p));
    }
    const ACSolution sol = solve_ac(work, omega);
    for (int p = 0; p < 2; ++p)
      out.y(p, drive) = -sol.i_branch(src[static_cast<std::size_t>(p)]);
  }
  out.s = y_to_s(out.y, nl.ports()[0].z0_ohm, nl.ports()[1].z0_ohm);
  return out;
}

}  // namespace ipf
