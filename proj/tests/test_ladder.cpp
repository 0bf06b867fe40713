#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "ipf/ladder.hpp"
#include "ipf/network.hpp"

using namespace ipf;
using Catch::Approx;

namespace {

// input impedance of the shorted N-section ladder at electrical length theta
Complex ladder_shorted_z(double z0, double theta_ref, double omega_ref, int n,
                         double omega) {
  Netlist nl;
  const NodeId a = nl.add_node("a");
  append_discretized_line(nl, a, ground_node, z0, theta_ref, omega_ref, n);
  nl.add_port(a, ground_node, z0);
  return 1.0 / input_admittance(nl, 0, omega);
}

double max_rel_error(int n, double z0, double theta_ref, double omega_ref,
                     const std::vector<double>& thetas) {
  double worst = 0.0;
  for (double theta : thetas) {
    const double omega = omega_ref * theta / theta_ref;
    const Complex z = ladder_shorted_z(z0, theta_ref, omega_ref, n, omega);
    const Complex z_exact{0.0, z0 * std::tan(theta)};
    worst = std::max(worst, std::abs(z - z_exact) / std::abs(z_exact));
  }
  return worst;
}

std::vector<double> theta_samples() {
  std::vector<double> t;
  for (double x = 0.05; x <= 1.2 + 1e-12; x += 0.05) t.push_back(x);
  return t;
}

}  // namespace

TEST_CASE("single-section ladder approximates an electrically short line", "[ladder]") {
  const double z0 = 50.0, w_ref = 2 * pi * 5e9, theta_ref = 1.0;
  const double theta = 0.1;
  const double omega = w_ref * theta / theta_ref;
  const Complex z = ladder_shorted_z(z0, theta_ref, w_ref, 1, omega);
  const Complex z_exact{0.0, z0 * std::tan(theta)};
  CHECK(std::abs(z - z_exact) / std::abs(z_exact) <= 0.01);
}

TEST_CASE("64-section ladder matches the exact stamp to 0.1%", "[ladder]") {
  const double err = max_rel_error(64, 50.0, 1.2, 2 * pi * 5e9, theta_samples());
  CHECK(err <= 1e-3);
}

TEST_CASE("ladder converges at second order", "[ladder]") {
  const double z0 = 50.0, w_ref = 2 * pi * 5e9, theta_ref = 1.2;
  const auto thetas = theta_samples();
  const double e8 = max_rel_error(8, z0, theta_ref, w_ref, thetas);
  const double e16 = max_rel_error(16, z0, theta_ref, w_ref, thetas);
  const double e32 = max_rel_error(32, z0, theta_ref, w_ref, thetas);
  CHECK(e8 / e16 == Approx(4.0).margin(0.8));
  CHECK(e16 / e32 == Approx(4.0).margin(0.8));
}

TEST_CASE("ladder validation", "[ladder]") {
  CHECK_THROWS_AS(discretize_line(50.0, 1.0, 1e10, 0), InvalidNetlist);
  CHECK_THROWS_AS(discretize_line(-50.0, 1.0, 1e10, 4), InvalidNetlist);
}
