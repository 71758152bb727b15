#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "spaser/core/error.hpp"
#include "spaser/core/params.hpp"
#include "spaser/core/state.hpp"

namespace spaser {

struct IntegratorControls {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    /// Upper bound on the step; <= 0 selects 0.1 / gamma_n.
    double max_step = 0.0;
    /// Minimum spacing of recorded trajectory points; 0 records every accepted step.
    double sample_interval = 0.0;
    double trace_limit = 1e-6;
    /// Populations must stay inside [-tol, 1 + tol].
    double population_tolerance = 1e-6;
    std::size_t max_steps = 100'000'000;
};

class IntegrationError : public Error {
public:
    enum class Kind { StepUnderflow, TraceDrift, PopulationBounds, StepLimit };

    IntegrationError(Kind kind, const std::string& what, double t, const SpaserState& last_good)
        : Error(what), kind_(kind), t_(t), last_good_(last_good) {}

    Kind kind() const { return kind_; }
    /// Time of the last accepted step.
    double time() const { return t_; }
    const SpaserState& last_good_state() const { return last_good_; }

private:
    Kind kind_;
    double t_;
    SpaserState last_good_;
};

struct TrajectoryPoint {
    double t = 0.0;
    SpaserState state;
    double plasmon_number = 0.0;
    double trace_error = 0.0;  ///< |trace(rho) - 1|
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    double max_trace_error = 0.0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

/// Embedded Runge-Kutta 5(4) (Dormand-Prince) with PI step-size control.
/// Integrates the packed 11-component state, so Hermiticity holds by
/// construction and the trace drift stays observable.
class Integrator {
public:
    using Observer = std::function<void(double t, const StateVector& y)>;

    Integrator(const ModelParams& params, const IntegratorControls& controls,
               const SpaserState& initial, double t0 = 0.0);

    /// Advances exactly to `t_target`, calling `observer` after every accepted step.
    void advance(double t_target, const Observer& observer = {});

    double time() const { return t_; }
    const StateVector& vector() const { return y_; }
    SpaserState state() const { return unpack(y_); }
    double max_trace_error() const { return max_trace_error_; }
    std::size_t accepted_steps() const { return accepted_; }
    std::size_t rejected_steps() const { return rejected_; }

private:
    double initial_step() const;

    ModelParams params_;
    ComplexRates rates_;
    IntegratorControls controls_;
    double max_step_;
    double t_;
    StateVector y_;
    StateVector k1_;
    double h_ = 0.0;
    double err_old_ = 1e-4;
    double max_trace_error_ = 0.0;
    std::size_t accepted_ = 0;
    std::size_t rejected_ = 0;
};

/// Integrates from t = 0 to t_end and records the trajectory.
Trajectory integrate(const SpaserState& state0, const ModelParams& params, double t_end,
                     const IntegratorControls& controls = {});

}  // namespace spaser
