#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "spaser/cli/config.hpp"
#include "spaser/cli/table.hpp"

namespace spaser::cli {

/// Invalid command/config combination (e.g. steady-sweep without axes).
class UsageError : public Error {
public:
    using Error::Error;
};

struct CommandResult {
    SweepTable table;
    /// Grid points (rows for trajectories) whose computation failed or did not converge.
    std::size_t unconverged = 0;
    std::vector<std::string> warnings;
};

/// One grid point per combination of axis values, first axis slowest.
std::vector<std::vector<double>> grid_points(const std::vector<SweepAxis>& axes);

/// Model parameters at one grid point, frame resolved.
ModelParams point_params(const RunConfig& config, const std::vector<double>& point);

/// Runs `task(i)` for i in [0, n) on up to `workers` threads (0 = hardware
/// concurrency). Every index is visited exactly once; results go to slot i.
void run_indexed(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& task);

/// Time series from the ground state |1> with plasmon amplitude seed_amplitude,
/// one block of rows per grid point.
/// Columns: swept params, t, N_n, rho11, rho22, rho33, re_rho21, im_rho21, trace_err, converged.
CommandResult cmd_trajectory(const RunConfig& config);

/// Columns: swept params, N_n, n21, n32, rho11, rho22, rho33, nu_s, stable, converged.
/// Requires 1 to 3 axes.
CommandResult cmd_steady_sweep(const RunConfig& config);

/// Columns: swept params, g_th_onset, g_th_growth, nu_s, ratio_to_undriven,
/// has_threshold, consistent, converged, where ratio_to_undriven = g_th(Omega_a = 0) / g_th_onset.
/// A point without threshold up to 1e16 rad/s
/// has has_threshold = 0 and NaN thresholds.
CommandResult cmd_threshold(const RunConfig& config);

/// Columns: swept params, omega_a_rabi and pump_g (when not swept), gamma_s,
/// gamma_s_over_gamma_n, re_lambda, im_lambda, converged.
CommandResult cmd_stability(const RunConfig& config);

/// Calibrates plasmon.omega_b_single against the default threshold-ratio target.
/// Columns: omega_b_single, ratio, g_th_off, g_th_on, iterations, converged; when the
/// target is unreachable the sampled ratio curve is emitted with converged = 0.
CommandResult cmd_calibrate(const RunConfig& config);

/// Dispatches on "trajectory", "steady-sweep", "threshold", "stability", "calibrate".
CommandResult run_command(const std::string& name, const RunConfig& config);

/// Adds command, version, git describe, config hash and the resolved parameters.
void stamp_metadata(SweepTable& table, const RunConfig& config, const std::string& command);

/// The executable: parses arguments, runs, emits. Returns the process exit code
/// (0 all converged, 2 partial, 1 config or usage error).
int run_app(int argc, char** argv);

}  // namespace spaser::cli
