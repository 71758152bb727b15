#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spaser/core/integrator.hpp"
#include "spaser/core/params.hpp"
#include "spaser/core/state.hpp"

namespace spaser::analysis {

enum class SteadyMethod { OdeRelaxation, AlgebraicRoot };
enum class BranchHint { Zero, Spasing };

const char* to_string(SteadyMethod m);

struct SteadyStateOptions {
    /// Newton stops when the max-norm of the rate-scaled residual drops below this.
    double newton_tol = 1e-11;
    /// Relaxation stops when phase-invariant observables change by less than this
    /// (relative) over two consecutive integration chunks.
    double relax_tol = 1e-8;
    double seed_amplitude = 1e-3;
    /// Run both routes on the spasing branch and record their disagreement.
    bool cross_check = true;
    /// Cross-check disagreement (relative, on N_n) above which a warning is attached.
    double agreement_tol = 1e-3;
    /// Reject algebraic roots whose linearization has a growing mode.
    bool require_stable = true;
    IntegratorControls relax_controls = [] {
        IntegratorControls c;
        c.rel_tol = 1e-10;
        c.abs_tol = 1e-13;
        c.max_step = std::numeric_limits<double>::infinity();
        c.max_steps = 40'000'000;
        return c;
    }();
};

struct SteadyStateResult {
    double plasmon_number = 0.0;
    double amplitude = 0.0;  ///< a0n with the global phase fixed so that it is real, >= 0
    double n21 = 0.0;
    double n32 = 0.0;
    DensityMatrix3 rho;
    double nu_s = 0.0;  ///< frequency at which the state is stationary
    double residual_norm = 0.0;
    SteadyMethod method = SteadyMethod::AlgebraicRoot;
    bool converged = false;
    /// Largest Re(lambda) of the linearization at the returned state, phase mode
    /// excluded (rad/s); NaN when not evaluated.
    double spectral_abscissa = std::numeric_limits<double>::quiet_NaN();
    bool linearly_stable = true;
    /// |N_ode / N_root - 1| when both routes ran, NaN otherwise.
    double cross_check_deviation = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> warnings;
};

/// Steady state of the full model. Below threshold (non-positive growth rate of the
/// a = 0 point) or with BranchHint::Zero this is the plasmon-free fixed point;
/// otherwise the stationary spasing state from a Newton solve in phase-invariant
/// variables (frequency as extra unknown). A linearly stable root is cross-checked
/// against long-time relaxation; an unstable one is returned flagged, since the
/// trajectory then never settles. Relaxation alone is used when Newton fails.
/// Throws ConvergenceError when neither route converges.
SteadyStateResult steady_state_numeric(const ModelParams& params,
                                       BranchHint hint = BranchHint::Spasing,
                                       const SteadyStateOptions& options = {});

/// Long-time integration from `initial` until the phase-invariant observables settle.
/// The returned state is gauge-fixed; nu_s is read off the residual phase rotation.
SteadyStateResult relax_to_steady_state(const SpaserState& initial, const ModelParams& params,
                                        const SteadyStateOptions& options = {});

/// Damped Newton on the phase-invariant algebraic system from a ladder of seeds.
/// Returns the first converged, physical root with N_n > 0 (linearly stable unless
/// options.require_stable is false).
std::optional<SteadyStateResult> solve_spasing_root(const ModelParams& params,
                                                    const SteadyStateOptions& options = {});

/// Rate-scaled max-norm of the stationarity residual of `state` in the frame `nu`.
double stationarity_residual(const SpaserState& state, const ModelParams& params, double nu);

}  // namespace spaser::analysis
