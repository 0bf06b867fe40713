#pragma once

#include <filesystem>
#include <vector>

#include "ipf/constants.hpp"
#include "ipf/csv.hpp"
#include "ipf/errors.hpp"
#include "ipf/purcell.hpp"

namespace ipf {

// =============================================================================
// Inference of the feedline decay rate from driven Rabi oscillations, with
// the waveguide-topology factor: a mode on a two-sided waveguide is excited
// at half its total decay rate, a one-sided mode at the full rate.
// =============================================================================

enum class WaveguideTopology { OneSided, TwoSided };

struct RabiObservation {
  double omega_rabi = 0.0;  // rad/s
  double power_w = 0.0;     // drive power at the device
  double omega_d = 0.0;     // drive frequency, on resonance with the qubit
  WaveguideTopology topology = WaveguideTopology::TwoSided;

  void validate() const {
    if (!(omega_rabi > 0.0) || !(power_w > 0.0) || !(omega_d > 0.0))
      throw Error("Rabi observation requires positive Omega, P and drive frequency");
  }
};

/// Decay rate into the feedline from a resonant drive:
///   two-sided: Gamma = (Omega^2/2) hbar w_q / P
///   one-sided: Gamma = (Omega^2/4) hbar w_q / P
inline DecayRate gamma_from_rabi(const RabiObservation& obs) {
  obs.validate();
  const double quarter =
      obs.omega_rabi * obs.omega_rabi * 0.25 * hbar * obs.omega_d / obs.power_w;
  return {obs.topology == WaveguideTopology::TwoSided ? 2.0 * quarter : quarter};
}

/// Drive power that reproduces a Purcell-limited lifetime T1 at Rabi rate
/// Omega (two-sided waveguide): P = Omega^2 hbar w_q T1 / 2.
inline double calibrate_power(double omega_rabi, double omega_q, double t1_s) {
  if (!(t1_s >= 0.0) || !(omega_q > 0.0) || !(omega_rabi >= 0.0))
    throw Error("calibrate_power requires omega_rabi, T1 >= 0 and omega_q > 0");
  return omega_rabi * omega_rabi * hbar * omega_q * t1_s / 2.0;
}

/// Conservative lower bound on the Purcell-limited lifetime from an upper
/// bound on the decay rate (attenuation frozen at the calibration point).
inline double t1p_lower_bound(double gamma_upper) {
  if (!(gamma_upper > 0.0))
    throw DivisionByZero("T1 bound undefined for non-positive rate");
  return 1.0 / gamma_upper;
}

/// Read observations from a `omega_rad_s,power_w,freq_hz` CSV.
inline std::vector<RabiObservation> read_rabi_csv(const std::filesystem::path& path,
                                                  WaveguideTopology topology) {
  const CsvTable table = read_csv(path);
  if (table.columns != std::vector<std::string>{"omega_rad_s", "power_w", "freq_hz"})
    throw ParseError(path.string() + ": expected header omega_rad_s,power_w,freq_hz");
  std::vector<RabiObservation> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    RabiObservation obs{row[0], row[1], hz_to_rad(row[2]), topology};
    obs.validate();
    out.push_back(obs);
  }
  return out;
}

}  // namespace ipf
