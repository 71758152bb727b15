#include "spaser/analysis/calibration.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "spaser/analysis/spasing.hpp"

namespace spaser::analysis {

namespace {

ModelParams with_coupling(ModelParams p, double omega_b) {
    p.plasmon.omega_b_single = omega_b;
    return p;
}

ModelParams with_drive(ModelParams p, double omega_a) {
    p.drive.omega_a_rabi = omega_a;
    return p;
}

struct Thresholds {
    double off = std::numeric_limits<double>::quiet_NaN();
    double on = std::numeric_limits<double>::quiet_NaN();
    double ratio() const { return off / on; }
};

Thresholds thresholds(const ModelParams& p, const CalibrationTargets& t) {
    Thresholds out;
    try {
        out.off = onset_threshold(with_drive(p, t.drive_off), t.pump_scan[0], t.pump_scan[1]);
        out.on = onset_threshold(with_drive(p, t.drive_on), t.pump_scan[0], t.pump_scan[1]);
    } catch (const NoSignChange&) {
    }
    return out;
}

}  // namespace

double threshold_ratio(const ModelParams& params, const CalibrationTargets& targets) {
    return thresholds(params, targets).ratio();
}

CalibrationResult calibrate_coupling(const CalibrationTargets& targets, const ModelParams& params) {
    validate(params);
    const double lo0 = targets.omega_b_bracket[0];
    const double hi0 = targets.omega_b_bracket[1];
    if (!(lo0 > 0.0) || !(hi0 > lo0))
        throw InvalidParams("calibrate_coupling: omega_b bracket must satisfy 0 < lo < hi");

    auto accepted = [&](const Thresholds& th) {
        return std::abs(th.ratio() / targets.threshold_ratio - 1.0) <= targets.rel_tol;
    };

    double lo = std::log(lo0), hi = std::log(hi0);
    const Thresholds th_lo = thresholds(with_coupling(params, lo0), targets);
    const Thresholds th_hi = thresholds(with_coupling(params, hi0), targets);

    auto finish = [&](double log_ob, const Thresholds& th, int it) {
        CalibrationResult r;
        r.omega_b_single = std::exp(log_ob);
        r.achieved_ratio = th.ratio();
        r.g_th_off = th.off;
        r.g_th_on = th.on;
        r.iterations = it;
        return r;
    };
    if (std::isfinite(th_lo.ratio()) && accepted(th_lo)) return finish(lo, th_lo, 0);

    // Aim at the near edge of the acceptance band, seen from the lower end of the
    // bracket; the first iterate inside the band is returned.
    const bool from_below = std::isfinite(th_lo.ratio()) && th_lo.ratio() < targets.threshold_ratio;
    const double edge = targets.threshold_ratio * (from_below ? 1.0 - targets.rel_tol
                                                              : 1.0 + targets.rel_tol);
    auto side = [&](const Thresholds& th) { return th.ratio() - edge; };
    const double m_lo = side(th_lo), m_hi = side(th_hi);

    if (!std::isfinite(m_lo) || !std::isfinite(m_hi) || (m_lo > 0.0) == (m_hi > 0.0)) {
        std::vector<std::pair<double, double>> curve;
        for (int i = 0; i <= 8; ++i) {
            const double ob = std::exp(lo + (hi - lo) * i / 8.0);
            curve.emplace_back(ob, threshold_ratio(with_coupling(params, ob), targets));
        }
        std::ostringstream os;
        os << "calibrate_coupling: threshold ratio " << targets.threshold_ratio
           << " is not reachable with omega_b_single in [" << lo0 << ", " << hi0 << "]; ratios:";
        for (const auto& [ob, r] : curve) os << " (" << ob << ", " << r << ")";
        throw CalibrationError(os.str(), std::move(curve));
    }

    for (int it = 1; it <= targets.max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Thresholds th = thresholds(with_coupling(params, std::exp(mid)), targets);
        const double m = side(th);
        if (std::isfinite(m) && accepted(th)) return finish(mid, th, it);
        if (!std::isfinite(m) || (m > 0.0) == (m_lo > 0.0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    throw ConvergenceError("calibrate_coupling: bisection did not reach the target tolerance");
}

}  // namespace spaser::analysis
