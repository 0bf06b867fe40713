#pragma once

#include <complex>
#include <numbers>

namespace ipf {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * pi;

// CODATA 2018 (SI exact)
inline constexpr double planck_h = 6.62607015e-34;            // J s
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C

inline constexpr Complex j_unit{0.0, 1.0};

/// Convert ordinary frequency [Hz] to angular frequency [rad/s].
inline constexpr double hz_to_rad(double f_hz) { return two_pi * f_hz; }

/// Convert angular frequency [rad/s] to ordinary frequency [Hz].
inline constexpr double rad_to_hz(double omega) { return omega / two_pi; }

}  // namespace ipf
