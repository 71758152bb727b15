#pragma once

#include <string>
#include <vector>

#include "spaser/core/params.hpp"

namespace spaser::analysis {

/// Asymptotic plasmon number with the regime conditions that were not met.
struct LimitEstimate {
    double plasmon_number = 0.0;
    std::vector<std::string> warnings;
};

/// Strong drive (Omega_a >> gamma21, gamma_n) with gamma31 << gamma32 << gamma21:
/// N_n ~ N_p (g - gamma21) / (6 gamma_n), clamped to 0 for g <= gamma21.
LimitEstimate limit_strong_drive(const ModelParams& params);

/// Weak drive (Omega_a << gamma21, gamma_n):
/// N_n ~ N_p gamma32 (g - gamma21) / (2 gamma_n gamma21), clamped to 0 for g <= gamma21.
LimitEstimate limit_weak_drive(const ModelParams& params);

/// Separation factor used for the "much less than" regime checks.
inline constexpr double kRegimeSeparation = 10.0;

}  // namespace spaser::analysis
