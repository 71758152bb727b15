#include "spaser/analysis/limits.hpp"

#include <algorithm>

namespace spaser::analysis {

namespace {

void check(bool ok, const char* condition, std::vector<std::string>& warnings) {
    if (!ok) warnings.emplace_back(std::string("regime condition not met: ") + condition);
}

void check_ordering(const ModelParams& p, std::vector<std::string>& w) {
    const auto& g = p.gain;
    check(kRegimeSeparation * g.gamma31 <= g.gamma32, "gamma31 << gamma32", w);
    check(kRegimeSeparation * g.gamma32 <= g.gamma21, "gamma32 << gamma21", w);
    check(g.pump_g > g.gamma21, "g > gamma21", w);
}

}  // namespace

LimitEstimate limit_strong_drive(const ModelParams& p) {
    LimitEstimate out;
    check_ordering(p, out.warnings);
    const double oa = p.drive.omega_a_rabi;
    check(oa >= kRegimeSeparation * p.gain.gamma21, "Omega_a >> gamma21", out.warnings);
    check(oa >= kRegimeSeparation * p.plasmon.gamma_n, "Omega_a >> gamma_n", out.warnings);
    const double excess = std::max(0.0, p.gain.pump_g - p.gain.gamma21);
    out.plasmon_number = p.plasmon.n_p * excess / (6.0 * p.plasmon.gamma_n);
    return out;
}

LimitEstimate limit_weak_drive(const ModelParams& p) {
    LimitEstimate out;
    check_ordering(p, out.warnings);
    const double oa = p.drive.omega_a_rabi;
    check(kRegimeSeparation * oa <= p.gain.gamma21, "Omega_a << gamma21", out.warnings);
    check(kRegimeSeparation * oa <= p.plasmon.gamma_n, "Omega_a << gamma_n", out.warnings);
    const double excess = std::max(0.0, p.gain.pump_g - p.gain.gamma21);
    out.plasmon_number = p.plasmon.n_p * p.gain.gamma32 * excess /
                         (2.0 * p.plasmon.gamma_n * p.gain.gamma21);
    return out;
}

}  // namespace spaser::analysis
