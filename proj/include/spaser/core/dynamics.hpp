#pragma once

#include <Eigen/Dense>

#include "spaser/core/params.hpp"
#include "spaser/core/state.hpp"

namespace spaser {

/// Trace deviation above which a state is rejected as invalid input.
inline constexpr double kTraceTolerance = 1e-6;

/// Time derivative of the rotating-frame Bloch + plasmon-amplitude system.
///
/// The plasmon enters the |2>-|1> transition through Omega_b = omega_b_single * a,
/// the drive through the real constant Omega_a on |3>-|2>. Populations are refilled
/// by the spontaneous decays and by the pump |1> -> |3>, so the trace of the
/// returned density-matrix derivative vanishes identically.
///
/// Throws InvalidState for non-finite entries or |trace - 1| > kTraceTolerance.
SpaserState equations_of_motion(const SpaserState& state, const ModelParams& params);

/// Unchecked right-hand side on the packed layout; `rates` must equal complex_rates(params).
StateVector rhs(const StateVector& y, const ModelParams& params, const ComplexRates& rates);

using Jacobian = Eigen::Matrix<double, 10, 10>;

/// Right-hand side on the trace-eliminated layout (rows: d rho11, d rho22, coherences, a).
ReducedVector rhs_reduced(const ReducedVector& x, const ModelParams& params);

/// Analytic Jacobian of rhs_reduced.
Jacobian jacobian(const SpaserState& state, const ModelParams& params);

/// Derivative of rhs_reduced with respect to frame.nu_ref at fixed state.
ReducedVector frame_derivative(const SpaserState& state);

}  // namespace spaser
