#pragma once

#include <array>
#include <string>

#include "spaser/core/error.hpp"
#include "spaser/core/params.hpp"

namespace spaser::analysis {

/// A bracketed root search found the same sign at both ends.
class NoSignChange : public Error {
public:
    NoSignChange(const std::string& what, double lo, double hi, double f_lo, double f_hi)
        : Error(what), lo_(lo), hi_(hi), f_lo_(f_lo), f_hi_(f_hi) {}
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double value_at_lo() const { return f_lo_; }
    double value_at_hi() const { return f_hi_; }

private:
    double lo_, hi_, f_lo_, f_hi_;
};

/// Onset (threshold) condition of the linearized plasmon + gain-polarization problem,
/// written as LHS - 1 so that a complex zero marks threshold. All rates are evaluated
/// in the frame rotating at `nu_s`. Requires delta_a == 0.
cplx spasing_condition_residual(const ModelParams& params, double nu_s);

/// Frequency-pulling formula: a weighted mean of omega21 and omega_n with weights set
/// by the real parts of the coherence rates, the drive and the plasmon linewidth.
/// Iterated to a fixed point (|change| < 1e-3 rad/s). This is first order in the
/// detunings and exact only for a vanishing drive.
double spasing_frequency_closed_form(const ModelParams& params);

/// Frequency at which the onset condition is real: the closed-form value refined by
/// a scalar root search on Im(spasing_condition_residual). Requires delta_a == 0.
double spasing_frequency(const ModelParams& params);

/// Copy of `params` rotating at spasing_frequency (falls back to omega21 when
/// delta_a != 0).
ModelParams with_spasing_frame(const ModelParams& params);

struct ThresholdResult {
    double g_th = 0.0;         ///< from the onset condition
    double nu_s = 0.0;         ///< spasing frequency at g_th
    cplx residual{};           ///< onset residual at (g_th, nu_s)
    double g_th_growth = 0.0;  ///< from the sign change of the growth rate (NaN if absent)
    bool consistent = false;   ///< |g_th_growth / g_th - 1| <= 1%
};

/// Re(spasing_condition_residual) at the self-consistent frequency, as a function of pump.
double threshold_residual(const ModelParams& params, double pump_g);

/// Bisection on threshold_residual over `g_bracket` (rad/s), then a cross-check
/// against the sign change of growth_rate inside the same bracket.
/// Throws NoSignChange carrying both endpoint residuals.
ThresholdResult threshold_find(const ModelParams& params, std::array<double, 2> g_bracket);

/// Pump at which the leading plasmon-coupled eigenvalue crosses zero.
double threshold_from_growth_rate(const ModelParams& params, std::array<double, 2> g_bracket);

/// Scans `samples` points of [lo, hi] for the first pump where the onset residual
/// turns positive; returns the bracketing pair or throws NoSignChange.
std::array<double, 2> bracket_threshold(const ModelParams& params, double lo, double hi,
                                        int samples = 64);

/// Lowest pump in [g_lo, g_hi] satisfying the onset condition: bracket_threshold
/// followed by bisection, without the growth-rate cross-check.
double onset_threshold(const ModelParams& params, double g_lo, double g_hi, int samples = 64);

}  // namespace spaser::analysis
