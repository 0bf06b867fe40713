#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "ipf/mna.hpp"
#include "ipf/netlist.hpp"

using namespace ipf;
using Catch::Approx;

TEST_CASE("symmetric resistive divider", "[mna]") {
  Netlist nl;
  const NodeId top = nl.add_node("top");
  const NodeId mid = nl.add_node("mid");
  nl.add_voltage_source(top, ground_node, Complex{1.0, 0.0});
  nl.add_resistor(top, mid, 100.0);
  nl.add_resistor(mid, ground_node, 100.0);

  const ACSolution sol = solve_ac(nl, 2 * pi * 1e9);
  CHECK(sol.v(mid).real() == Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(sol.v(mid).imag()) < 1e-12);
  CHECK(sol.residual_rel <= 1e-9);
}

TEST_CASE("series LC at resonance is a short", "[mna]") {
  // 1 V source -> 50 ohm -> L -> C -> ground; at w = 1/sqrt(LC) the LC branch
  // voltage collapses
  const double l = 2e-9, c = 5e-13;
  const double w0 = 1.0 / std::sqrt(l * c);

  Netlist nl;
  const NodeId src = nl.add_node("src");
  const NodeId a = nl.add_node("a");
  const NodeId b = nl.add_node("b");
  nl.add_voltage_source(src, ground_node, Complex{1.0, 0.0});
  nl.add_resistor(src, a, 50.0);
  nl.add_inductor(a, b, l);
  nl.add_capacitor(b, ground_node, c);

  const ACSolution sol = solve_ac(nl, w0);
  CHECK(std::abs(sol.v(a)) <= 1e-6);
}

TEST_CASE("three-branch tank matches closed form", "[mna]") {
  // parallel L_r, C_r and series C_k - R_e, driven by a 1 A probe
  const double l_r = 1.4475e-9, c_r = 3.2905e-13, c_k = 1.689e-14, r_e = 50.0;

  Netlist nl;
  const NodeId r = nl.add_node("r");
  const NodeId k = nl.add_node("k");
  nl.add_inductor(r, ground_node, l_r);
  nl.add_capacitor(r, ground_node, c_r);
  nl.add_capacitor(r, k, c_k);
  nl.add_resistor(k, ground_node, r_e);
  nl.add_current_source(ground_node, r, Complex{-1.0, 0.0});  // 1 A into node r

  for (double f_ghz : {4.0, 5.0, 6.9, 7.1, 9.0}) {
    const double w = 2 * pi * f_ghz * 1e9;
    const ACSolution sol = solve_ac(nl, w);

    const Complex jw{0.0, w};
    const Complex y_tank = 1.0 / (jw * l_r) + jw * c_r + jw * c_k / (1.0 + jw * c_k * r_e);
    const Complex v_expected = 1.0 / y_tank;
    CHECK(std::abs(sol.v(r) - v_expected) <= 1e-9 * std::abs(v_expected));

    const Complex v_k_expected = v_expected * r_e / (r_e + 1.0 / (jw * c_k));
    CHECK(std::abs(sol.v(k) - v_k_expected) <= 1e-9 * std::abs(v_k_expected));
  }
}

TEST_CASE("k = 1 coupled pair with open secondary acts as ideal transformer", "[mna]") {
  const double l1 = 1e-9, l2 = 9e-9;

  Netlist nl;
  const NodeId p = nl.add_node("p");
  const NodeId s = nl.add_node("s");
  nl.add_voltage_source(p, ground_node, Complex{1.0, 0.0});
  nl.add_coupled_inductors(p, ground_node, s, ground_node, l1, l2, 1.0);

  const ACSolution sol = solve_ac(nl, 2 * pi * 5e9);
  const double ratio = std::abs(sol.v(s) / sol.v(p));
  CHECK(ratio == Approx(std::sqrt(l2 / l1)).epsilon(1e-9));
}

TEST_CASE("floating subcircuit is rejected", "[mna]") {
  Netlist nl;
  const NodeId a = nl.add_node("a");
  const NodeId b = nl.add_node("b");
  const NodeId c = nl.add_node("c");
  nl.add_voltage_source(a, ground_node, Complex{1.0, 0.0});
  nl.add_resistor(b, c, 10.0);  // no path to ground
  CHECK_THROWS_AS(solve_ac(nl, 1e9), InvalidNetlist);
}

TEST_CASE("conflicting ideal sources give a singular system", "[mna]") {
  Netlist nl;
  const NodeId a = nl.add_node("a");
  nl.add_voltage_source(a, ground_node, Complex{1.0, 0.0});
  nl.add_voltage_source(a, ground_node, Complex{2.0, 0.0});
  nl.add_resistor(a, ground_node, 50.0);
  CHECK_THROWS_AS(solve_ac(nl, 1e9), SingularSystem);
}

TEST_CASE("element validation", "[netlist]") {
  Netlist nl;
  const NodeId a = nl.add_node("a");
  nl.add_resistor(a, ground_node, -5.0);
  CHECK_THROWS_AS(nl.validate(), InvalidNetlist);

  Netlist nl2;
  const NodeId b = nl2.add_node("b");
  const NodeId c = nl2.add_node("c");
  nl2.add_coupled_inductors(b, ground_node, c, ground_node, 1e-9, 1e-9, 1.5);
  CHECK_THROWS_AS(nl2.validate(), InvalidNetlist);

  CHECK_THROWS_AS(Netlist{}.add_port(ground_node, ground_node, -50.0), InvalidNetlist);
}

TEST_CASE("source-free network solves to zero", "[mna]") {
  Netlist nl;
  const NodeId a = nl.add_node("a");
  nl.add_resistor(a, ground_node, 50.0);
  nl.add_capacitor(a, ground_node, 1e-15);
  const ACSolution sol = solve_ac(nl, 1e10);
  CHECK(std::abs(sol.v(a)) == 0.0);
}
