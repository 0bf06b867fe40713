#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ipf/constants.hpp"
#include "ipf/errors.hpp"
#include "ipf/netlist.hpp"

namespace ipf {

// =============================================================================
// Modified nodal analysis in the frequency domain.
//
// Unknowns are the non-ground node voltages plus one branch current per
// inductor and voltage source and two per coupled pair. Branch rows impose
// V+ - V- = jw * (L i) so that singular inductance matrices (k = 1) never
// need inversion. The dense system is solved by partially pivoted LU with
// one step of iterative refinement.
// =============================================================================

/// Steady-state solution at a single angular frequency.
struct ACSolution {
  double omega = 0.0;
  std::vector<Complex> node_voltage;                   // indexed by NodeId
  std::vector<std::array<Complex, 2>> branch_current;  // indexed by element
  double residual_rel = 0.0;                           // ||Ax-b|| / ||b||

  Complex v(NodeId n) const {
    return n == ground_node ? Complex{0.0, 0.0}
                            : node_voltage.at(static_cast<std::size_t>(n));
  }
  Complex i_branch(std::size_t element_index, int winding = 0) const {
    return branch_current.at(element_index)[static_cast<std::size_t>(winding)];
  }
};

namespace detail {

// A line stamped at an electrical length within 1e-6 rad of a multiple of pi
// is singular; evaluate at a length perturbed by 1e-6 rad instead.
inline double desingularize_theta(double theta) {
  constexpr double eps = 1e-6;
  const double m = std::round(theta / pi);
  const double d = theta - m * pi;
  if (std::abs(d) < eps) {
    if (m == 0.0) return eps;  // theta > 0 by construction
    return m * pi + (d >= 0.0 ? eps : -eps);
  }
  return theta;
}

struct MnaLayout {
  std::size_t n_nodes = 0;
  std::size_t n_branches = 0;
  std::vector<std::array<int, 2>> branch_of;  // per element, -1 when absent

  explicit MnaLayout(const Netlist& nl) {
    n_nodes = nl.num_nodes();
    branch_of.assign(nl.elements().size(), {-1, -1});
    std::size_t next = n_nodes;
    for (std::size_t e = 0; e < nl.elements().size(); ++e) {
      const auto& el = nl.elements()[e];
      if (std::holds_alternative<Inductor>(el.device) ||
          std::holds_alternative<VoltageSource>(el.device)) {
        branch_of[e][0] = static_cast<int>(next++);
      } else if (std::holds_alternative<CoupledInductors>(el.device)) {
        branch_of[e][0] = static_cast<int>(next++);
        branch_of[e][1] = static_cast<int>(next++);
      }
    }
    n_branches = next - n_nodes;
  }

  std::size_t size() const { return n_nodes + n_branches; }
};

inline void assemble(const Netlist& nl, double omega, const MnaLayout& layout,
                     Eigen::MatrixXcd& a, Eigen::VectorXcd& b) {
  const auto n = static_cast<Eigen::Index>(layout.size());
  a.setZero(n, n);
  b.setZero(n);

  auto add = [&](int row, int col, Complex val) {
    if (row >= 0 && col >= 0) a(row, col) += val;
  };
  auto stamp_admittance = [&](NodeId p, NodeId q, Complex y) {
    add(p, p, y);
    add(q, q, y);
    add(p, q, -y);
    add(q, p, -y);
  };
  auto stamp_branch = [&](NodeId p, NodeId q, int br) {
    add(p, br, 1.0);
    add(q, br, -1.0);
    add(br, p, 1.0);
    add(br, q, -1.0);
  };

  const Complex jw = j_unit * omega;
  for (std::size_t e = 0; e < nl.elements().size(); ++e) {
    const auto& el = nl.elements()[e];
    const auto& nd = el.nodes;
    std::visit(
        [&](const auto& dev) {
          using T = std::decay_t<decltype(dev)>;
          if constexpr (std::is_same_v<T, Resistor>) {
            stamp_admittance(nd[0], nd[1], Complex{1.0 / dev.ohms, 0.0});
          } else if constexpr (std::is_same_v<T, Capacitor>) {
            stamp_admittance(nd[0], nd[1], jw * dev.farads);
          } else if constexpr (std::is_same_v<T, Inductor>) {
            const int br = layout.branch_of[e][0];
            stamp_branch(nd[0], nd[1], br);
            add(br, br, -jw * dev.henries);
          } else if constexpr (std::is_same_v<T, CoupledInductors>) {
            const int b1 = layout.branch_of[e][0];
            const int b2 = layout.branch_of[e][1];
            stamp_branch(nd[0], nd[1], b1);
            stamp_branch(nd[2], nd[3], b2);
            const Complex jm = jw * dev.mutual();
            add(b1, b1, -jw * dev.l1_h);
            add(b1, b2, -jm);
            add(b2, b1, -jm);
            add(b2, b2, -jw * dev.l2_h);
          } else if constexpr (std::is_same_v<T, TransmissionLine>) {
            const double theta = desingularize_theta(dev.theta(omega));
            const Complex y0 = 1.0 / (j_unit * dev.z0_ohm * std::sin(theta));
            const Complex y11 = y0 * std::cos(theta);
            const Complex y12 = -y0;
            // ground-referenced two-port stamp
            add(nd[0], nd[0], y11);
            add(nd[1], nd[1], y11);
            add(nd[0], nd[1], y12);
            add(nd[1], nd[0], y12);
          } else if constexpr (std::is_same_v<T, VoltageSource>) {
            const int br = layout.branch_of[e][0];
            stamp_branch(nd[0], nd[1], br);
            if (br >= 0) b(br) += dev.volts;
          } else if constexpr (std::is_same_v<T, CurrentSource>) {
            if (nd[0] >= 0) b(nd[0]) += dev.amps;
            if (nd[1] >= 0) b(nd[1]) -= dev.amps;
          }
        },
        el.device);
  }
}

}  // namespace detail

/// Solve the assembled nodal equations at angular frequency omega [rad/s].
/// Throws SingularSystem when the system cannot be solved to a relative
/// residual of 1e-9.
inline ACSolution solve_ac(const Netlist& nl, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw InvalidNetlist("solve_ac requires omega > 0");
  nl.validate();

  const detail::MnaLayout layout(nl);
  Eigen::MatrixXcd a;
  Eigen::VectorXcd b;
  detail::assemble(nl, omega, layout, a, b);

  ACSolution sol;
  sol.omega = omega;
  sol.node_voltage.assign(layout.n_nodes, Complex{0.0, 0.0});
  sol.branch_current.assign(nl.elements().size(), {Complex{0.0, 0.0}, Complex{0.0, 0.0}});

  const double bnorm = b.norm();
  if (bnorm == 0.0) return sol;  // source-free network

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  Eigen::VectorXcd x = lu.solve(b);
  // one step of iterative refinement tightens the residual well below the
  // 1e-9 contract for the well-scaled systems seen here
  Eigen::VectorXcd r = b - a * x;
  x += lu.solve(r);

  if (!x.allFinite())
    throw SingularSystem("singular nodal system at omega = " + std::to_string(omega));
  const double res = (a * x - b).norm() / bnorm;
  if (!(res <= 1e-9))
    throw SingularSystem("nodal solve residual " + std::to_string(res) +
                         " exceeds 1e-9 at omega = " + std::to_string(omega));

  for (std::size_t i = 0; i < layout.n_nodes; ++i)
    sol.node_voltage[i] = x(static_cast<Eigen::Index>(i));
  for (std::size_t e = 0; e < nl.elements().size(); ++e) {
    for (int w = 0; w < 2; ++w) {
      const int br = layout.branch_of[e][static_cast<std::size_t>(w)];
      if (br >= 0) sol.branch_current[e][static_cast<std::size_t>(w)] = x(br);
    }
  }
  sol.residual_rel = res;
  return sol;
}

}  // namespace ipf
