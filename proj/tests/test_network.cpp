#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "ipf/network.hpp"

using namespace ipf;
using Catch::Approx;

namespace {

Netlist matched_line(double theta_ref, double omega_ref, double z0 = 50.0) {
  Netlist nl;
  const NodeId in = nl.add_node("in");
  const NodeId out = nl.add_node("out");
  nl.add_tline(in, out, z0, theta_ref, omega_ref);
  nl.add_port(in, ground_node, z0);
  nl.add_port(out, ground_node, z0);
  return nl;
}

}  // namespace

TEST_CASE("single capacitor admittance is exactly jwC", "[network]") {
  const double c = 7.5e-15;
  Netlist nl;
  const NodeId a = nl.add_node("a");
  nl.add_capacitor(a, ground_node, c);
  nl.add_port(a, ground_node, 50.0);

  const double w = 2 * pi * 6e9;
  const Complex y = input_admittance(nl, 0, w);
  CHECK(std::abs(y - Complex{0.0, w * c}) <= 1e-12 * w * c);
}

TEST_CASE("shorted quarter-wave line looks open", "[network]") {
  const double w_ref = 2 * pi * 5e9;
  Netlist nl;
  const NodeId in = nl.add_node("in");
  const NodeId far = nl.add_node("far");
  nl.add_tline(in, far, 50.0, pi / 2, w_ref);
  nl.add_resistor(far, ground_node, 1e-9);  // short
  nl.add_port(in, ground_node, 50.0);

  const Complex y = input_admittance(nl, 0, w_ref);
  CHECK(std::abs(y) <= 1e-9);
}

TEST_CASE("matched through line is reflectionless with unit transmission", "[network]") {
  const double w_ref = 2 * pi * 5e9;
  for (double theta : {0.3, 1.0, 2.4}) {
    const Netlist nl = matched_line(theta, w_ref);
    const TwoPortParams tp = two_port_params(nl, w_ref);
    CHECK(std::abs(tp.s(1, 0)) == Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(tp.s(0, 0)) <= 1e-9);
    // lossless line: S21 = exp(-j theta)
    CHECK(std::arg(tp.s(1, 0)) == Approx(-theta).margin(1e-9));
  }
}

TEST_CASE("half-wave line inverts the wave", "[network]") {
  const double w_ref = 2 * pi * 5e9;
  const Netlist nl = matched_line(pi, w_ref);
  const TwoPortParams tp = two_port_params(nl, w_ref);
  CHECK(tp.s(1, 0).real() == Approx(-1.0).epsilon(1e-6));
  CHECK(std::abs(tp.s(1, 0).imag()) < 1e-4);
  CHECK(std::abs(tp.s(0, 0)) <= 1e-6);
}

TEST_CASE("S/Y conversions are mutually consistent", "[network]") {
  Netlist nl;
  const NodeId in = nl.add_node("in");
  const NodeId out = nl.add_node("out");
  nl.add_capacitor(in, out, 2e-14);
  nl.add_inductor(out, ground_node, 3e-10);
  nl.add_resistor(in, ground_node, 200.0);
  nl.add_port(in, ground_node, 50.0);
  nl.add_port(out, ground_node, 75.0);

  const double w = 2 * pi * 8e9;
  const TwoPortParams tp = two_port_params(nl, w);
  const Eigen::Matrix2cd y_back = s_to_y(tp.s, 50.0, 75.0);
  const double scale = tp.y.cwiseAbs().maxCoeff();
  CHECK((y_back - tp.y).cwiseAbs().maxCoeff() <= 1e-10 * scale);

  // reciprocity of a passive network
  CHECK(std::abs(tp.y(0, 1) - tp.y(1, 0)) <= 1e-9 * scale);
  CHECK(std::abs(tp.s(0, 1) - tp.s(1, 0)) <= 1e-9);
}

TEST_CASE("two_port_params requires exactly two ports", "[network]") {
  Netlist nl;
  const NodeId a = nl.add_node("a");
  nl.add_resistor(a, ground_node, 50.0);
  nl.add_port(a, ground_node, 50.0);
  CHECK_THROWS_AS(two_port_params(nl, 1e10), PortCountMismatch);
}

TEST_CASE("line stamp survives electrical lengths at multiples of pi", "[network]") {
  const double w_ref = 2 * pi * 5e9;
  const Netlist nl = matched_line(pi, w_ref);
  // theta(w) sweeps through pi exactly at w_ref and through 2 pi at 2 w_ref
  for (double w : {w_ref, 2 * w_ref}) {
    const TwoPortParams tp = two_port_params(nl, w);
    CHECK(std::abs(tp.s(1, 0)) == Approx(1.0).epsilon(1e-5));
  }
}
