#pragma once

namespace spaser::units {

/// Reduced Planck constant in eV*s (CODATA 2018, exact by SI definition).
inline constexpr double kHbarEvS = 6.582119569e-16;

/// Photon/plasmon energy in eV to angular frequency in rad/s.
double ev_to_angular(double energy_ev);

/// Inverse of ev_to_angular.
double angular_to_ev(double omega_rad_s);

}  // namespace spaser::units
