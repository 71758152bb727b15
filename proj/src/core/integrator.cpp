#include "spaser/core/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spaser/core/dynamics.hpp"

namespace spaser {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants (Hairer & Wanner, DOPRI5).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMaxGrow = 10.0;
constexpr double kMaxShrink = 5.0;

double trace_error(const StateVector& y) { return std::abs(y[0] + y[1] + y[2] - 1.0); }

}  // namespace

Integrator::Integrator(const ModelParams& params, const IntegratorControls& controls,
                       const SpaserState& initial, double t0)
    : params_(params),
      rates_(complex_rates(params)),
      controls_(controls),
      t_(t0),
      y_(pack(initial)) {
    validate(params_);
    if (!(controls_.rel_tol > 0.0) || !(controls_.abs_tol > 0.0))
        throw InvalidParams("integrator: tolerances must be > 0");
    // Validates the initial state.
    (void)equations_of_motion(initial, params_);
    max_step_ = controls_.max_step > 0.0 ? controls_.max_step : 0.1 / params_.plasmon.gamma_n;
    k1_ = rhs(y_, params_, rates_);
    max_trace_error_ = trace_error(y_);
}

double Integrator::initial_step() const {
    // Hairer's starting-step heuristic.
    const auto sc = (controls_.abs_tol + controls_.rel_tol * y_.array().abs()).matrix();
    const double d0 = std::sqrt((y_.array() / sc.array()).square().mean());
    const double d1 = std::sqrt((k1_.array() / sc.array()).square().mean());
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * max_step_ : 0.01 * d0 / d1;
    h0 = std::min(h0, max_step_);
    const StateVector y1 = y_ + h0 * k1_;
    const StateVector k2 = rhs(y1, params_, rates_);
    const double d2 = std::sqrt((((k2 - k1_).array() / sc.array())).square().mean()) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6 * h0, 1e-6 * max_step_) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, max_step_});
}

void Integrator::advance(double t_target, const Observer& observer) {
    if (t_target < t_) throw InvalidParams("integrator: cannot advance backwards in time");
    if (h_ == 0.0) h_ = initial_step();

    const auto& p = params_;
    const auto& r = rates_;
    while (t_ < t_target) {
        if (accepted_ + rejected_ >= controls_.max_steps) {
            throw IntegrationError(IntegrationError::Kind::StepLimit,
                                   "integrator: step limit exceeded", t_, unpack(y_));
        }
        const double remaining = t_target - t_;
        bool last = false;
        double h = std::min(h_, max_step_);
        if (h >= remaining) {
            h = remaining;
            last = true;
        }
        const double min_step = 16.0 * std::numeric_limits<double>::epsilon() *
                                std::max(std::abs(t_), std::abs(t_target));
        if (h < min_step && !last) {
            std::ostringstream os;
            os << "integrator: step size underflow (h = " << h << ") at t = " << t_;
            throw IntegrationError(IntegrationError::Kind::StepUnderflow, os.str(), t_,
                                   unpack(y_));
        }

        const StateVector& k1 = k1_;
        const StateVector k2 = rhs(y_ + h * (a21 * k1), p, r);
        const StateVector k3 = rhs(y_ + h * (a31 * k1 + a32 * k2), p, r);
        const StateVector k4 = rhs(y_ + h * (a41 * k1 + a42 * k2 + a43 * k3), p, r);
        const StateVector k5 = rhs(y_ + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), p, r);
        const StateVector k6 =
            rhs(y_ + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), p, r);
        const StateVector y_new =
            y_ + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const StateVector k7 = rhs(y_new, p, r);
        const StateVector err_vec =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const auto sc = (controls_.abs_tol +
                         controls_.rel_tol * y_.array().abs().max(y_new.array().abs()))
                            .matrix();
        const double err = std::sqrt((err_vec.array() / sc.array()).square().mean());

        if (!std::isfinite(err)) {
            ++rejected_;
            h_ = h / kMaxShrink;
            continue;
        }

        const double fac11 = std::pow(err, kExpo);
        if (err <= 1.0) {
            double fac = fac11 / std::pow(err_old_, kBeta);
            fac = std::clamp(fac / kSafety, 1.0 / kMaxGrow, kMaxShrink);
            err_old_ = std::max(err, 1e-4);
            t_ = last ? t_target : t_ + h;
            y_ = y_new;
            k1_ = k7;
            ++accepted_;
            h_ = h / fac;

            const double te = trace_error(y_);
            max_trace_error_ = std::max(max_trace_error_, te);
            if (te > controls_.trace_limit) {
                std::ostringstream os;
                os << "integrator: trace drift " << te << " exceeds " << controls_.trace_limit
                   << " at t = " << t_;
                throw IntegrationError(IntegrationError::Kind::TraceDrift, os.str(), t_,
                                       unpack(y_));
            }
            const double tol = controls_.population_tolerance;
            for (int i = 0; i < 3; ++i) {
                if (y_[i] < -tol || y_[i] > 1.0 + tol) {
                    std::ostringstream os;
                    os << "integrator: population rho" << i + 1 << i + 1 << " = " << y_[i]
                       << " left [0, 1] at t = " << t_;
                    throw IntegrationError(IntegrationError::Kind::PopulationBounds, os.str(),
                                           t_, unpack(y_));
                }
            }
            if (observer) observer(t_, y_);
        } else {
            ++rejected_;
            h_ = h / std::min(kMaxShrink, fac11 / kSafety);
        }
    }
}

Trajectory integrate(const SpaserState& state0, const ModelParams& params, double t_end,
                     const IntegratorControls& controls) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidParams("integrate: t_end must be > 0");
    Integrator integ(params, controls, state0);

    Trajectory traj;
    auto record = [&](double t, const StateVector& y) {
        TrajectoryPoint pt;
        pt.t = t;
        pt.state = unpack(y);
        pt.plasmon_number = pt.state.plasmon_number();
        pt.trace_error = trace_error(y);
        traj.points.push_back(pt);
    };
    record(0.0, integ.vector());
    double last_recorded = 0.0;
    integ.advance(t_end, [&](double t, const StateVector& y) {
        if (t - last_recorded >= controls.sample_interval || t == t_end) {
            record(t, y);
            last_recorded = t;
        }
    });
    if (traj.points.back().t != t_end) record(t_end, integ.vector());
    traj.max_trace_error = integ.max_trace_error();
    traj.accepted_steps = integ.accepted_steps();
    traj.rejected_steps = integ.rejected_steps();
    return traj;
}

}  // namespace spaser
