#pragma once

#include "spaser/core/params.hpp"
#include "spaser/core/state.hpp"

namespace spaser::analysis {

/// Steady-state inversions of the driven, plasmon-free gain medium.
struct ClosedFormInversions {
    double n21_bar = 0.0;  ///< rho22 - rho11
    double n32_bar = 0.0;  ///< rho33 - rho22
    double m = 0.0;        ///< common factor; its inverse is the shared denominator
};

/// Closed-form inversions for a resonant drive (delta_a == 0, so Gamma32 is real).
/// Throws InvalidParams if delta_a != 0 and DegenerateParameters if the
/// denominator vanishes.
ClosedFormInversions steady_inversions_closed_form(const ModelParams& params);

/// The a = 0 fixed point of the Bloch equations for arbitrary drive detuning,
/// found by solving the (linear) plasmon-free steady-state system directly.
DensityMatrix3 background_state(const ModelParams& params);

/// Steady state of the gain medium under a plasmon field of fixed real amplitude
/// `amplitude` (Omega_b = omega_b_single * amplitude) in the frame params.frame.nu_ref.
/// Throws DegenerateParameters if that state is not unique.
DensityMatrix3 medium_state(const ModelParams& params, double amplitude);

}  // namespace spaser::analysis
