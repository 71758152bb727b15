#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "spaser/core/error.hpp"
#include "spaser/core/params.hpp"

namespace spaser::analysis {

struct CalibrationTargets {
    /// Desired g_th(drive_off) / g_th(drive_on).
    double threshold_ratio = 2.0;
    double drive_off = 0.0;
    double drive_on = 16e12;
    /// Accept once |ratio / target - 1| <= rel_tol.
    double rel_tol = 0.01;
    /// Search interval for omega_b_single, bisected in log space.
    std::array<double, 2> omega_b_bracket{1e12, 1e14};
    /// Pump interval scanned for each threshold.
    std::array<double, 2> pump_scan{1e10, 2e13};
    int max_iterations = 60;
};

struct CalibrationResult {
    double omega_b_single = 0.0;
    double achieved_ratio = 0.0;
    double g_th_off = 0.0;
    double g_th_on = 0.0;
    int iterations = 0;
};

/// The target band is not reachable in the bracket; carries sampled (omega_b_single, ratio) pairs.
class CalibrationError : public Error {
public:
    CalibrationError(const std::string& what, std::vector<std::pair<double, double>> curve)
        : Error(what), curve_(std::move(curve)) {}
    const std::vector<std::pair<double, double>>& ratio_curve() const { return curve_; }

private:
    std::vector<std::pair<double, double>> curve_;
};

/// g_th(drive_off) / g_th(drive_on) at the coupling in `params`; NaN when either
/// threshold is absent from the pump scan.
double threshold_ratio(const ModelParams& params, const CalibrationTargets& targets);

/// Log-space bisection on omega_b_single towards the nearer edge of the band
/// target * (1 +- rel_tol); returns the first coupling whose ratio lies in the band.
CalibrationResult calibrate_coupling(const CalibrationTargets& targets, const ModelParams& params);

}  // namespace spaser::analysis
