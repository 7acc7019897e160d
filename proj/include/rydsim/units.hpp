#pragma once

#include <numbers>

// Unit conventions used throughout the library:
//   * hbar = 1, so energies and angular frequencies share units.
//   * Time is in microseconds (us), length in micrometers (um).
//   * All frequency-like quantities stored internally (Rabi couplings,
//     detunings, interaction strengths) are ANGULAR frequencies in rad/us.
//   * User-facing inputs are ordinary frequencies nu in MHz; convert with
//     omega = 2*pi*nu.  1 MHz = 1 cycle/us, so the numeric factor is just
//     2*pi.
namespace rydsim::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Speed of light in um/us (= m/s numerically).
inline constexpr double speed_of_light = 2.99792458e8;

// Ordinary frequency in MHz -> angular frequency in rad/us.
inline constexpr double mhz(double nu_mhz) { return two_pi * nu_mhz; }

// Angular frequency in rad/us -> ordinary frequency in MHz.
inline constexpr double to_mhz(double omega) { return omega / two_pi; }

// Nanoseconds -> microseconds.
inline constexpr double ns(double t_ns) { return 1.0e-3 * t_ns; }

}  // namespace rydsim::units
