#pragma once

#include <vector>

#include "spaser/core/params.hpp"
#include "spaser/core/state.hpp"

namespace spaser::analysis {

/// Linear stability of the non-spasing (a = 0) fixed point.
///
/// The fixed point is stationary in the rotating frame, so the growth exponents
/// are plain Jacobian eigenvalues lambda with perturbations ~ exp(lambda t).
/// gamma_s = Re(lambda) of the fastest-growing plasmon-coupled mode; under an
/// exp(-i lambda' t) convention the same number is Im(lambda').
struct StabilityResult {
    std::vector<cplx> eigenvalues;  ///< full spectrum of the 10x10 real Jacobian
    double gamma_s = 0.0;
    double gamma_s_over_gamma_n = 0.0;
    cplx leading_eigenvalue{};  ///< the eigenvalue realizing gamma_s
    double spectral_abscissa = 0.0;  ///< max Re over all modes (phase mode excluded)
};

/// Eigenvectors whose plasmon-amplitude weight |v_a|^2 / |v|^2 exceeds this count
/// as plasmon-coupled.
inline constexpr double kPlasmonWeightThreshold = 1e-12;

StabilityResult growth_rate(const ModelParams& params);

/// Same analysis at an arbitrary state (used for spasing fixed points, where one
/// zero eigenvalue belongs to the global phase and is excluded from gamma_s).
StabilityResult spectrum_at(const SpaserState& state, const ModelParams& params,
                            bool exclude_phase_mode);

}  // namespace spaser::analysis
