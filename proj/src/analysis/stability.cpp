#include "spaser/analysis/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "spaser/analysis/closed_form.hpp"
#include "spaser/core/dynamics.hpp"
#include "spaser/core/error.hpp"

namespace spaser::analysis {

StabilityResult spectrum_at(const SpaserState& state, const ModelParams& params,
                            bool exclude_phase_mode) {
    const Jacobian j = jacobian(state, params);
    Eigen::EigenSolver<Jacobian> es(j, true);
    if (es.info() != Eigen::Success) throw ConvergenceError("growth_rate: eigen-decomposition failed");

    const auto values = es.eigenvalues();
    const auto vectors = es.eigenvectors();

    int phase_mode = -1;
    if (exclude_phase_mode) {
        double smallest = std::numeric_limits<double>::infinity();
        for (int k = 0; k < values.size(); ++k) {
            if (std::abs(values[k]) < smallest) {
                smallest = std::abs(values[k]);
                phase_mode = k;
            }
        }
    }

    StabilityResult out;
    out.gamma_s = -std::numeric_limits<double>::infinity();
    out.spectral_abscissa = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < values.size(); ++k) {
        out.eigenvalues.push_back(values[k]);
        if (k == phase_mode) continue;
        out.spectral_abscissa = std::max(out.spectral_abscissa, values[k].real());
        const auto v = vectors.col(k);
        const double total = v.squaredNorm();
        const double weight =
            (std::norm(v[idx::re_a]) + std::norm(v[idx::im_a])) / (total > 0.0 ? total : 1.0);
        if (weight <= kPlasmonWeightThreshold) continue;
        if (values[k].real() > out.gamma_s) {
            out.gamma_s = values[k].real();
            out.leading_eigenvalue = values[k];
        }
    }
    out.gamma_s_over_gamma_n = out.gamma_s / params.plasmon.gamma_n;
    return out;
}

StabilityResult growth_rate(const ModelParams& params) {
    SpaserState s;
    s.rho = background_state(params);
    s.amplitude = 0.0;
    return spectrum_at(s, params, false);
}

}  // namespace spaser::analysis
