#include "spaser/analysis/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spaser/analysis/closed_form.hpp"
#include "spaser/analysis/spasing.hpp"
#include "spaser/analysis/stability.hpp"
#include "spaser/core/dynamics.hpp"
#include "spaser/core/error.hpp"

namespace spaser::analysis {

namespace {

double rate_scale(const ModelParams& p) {
    const auto& g = p.gain;
    return std::max({p.plasmon.gamma_n, g.pump_g, g.gamma21, g.gamma31 + g.gamma32, g.gamma_ph,
                     p.drive.omega_a_rabi, std::abs(p.drive.delta_a)});
}

// Rotates the global phase so that a is real and non-negative.
SpaserState fix_gauge(SpaserState s) {
    if (std::abs(s.amplitude) == 0.0) return s;
    const cplx phase = std::conj(s.amplitude) / std::abs(s.amplitude);
    s.amplitude = std::abs(s.amplitude);
    s.rho.rho21 *= phase;
    s.rho.rho31 *= phase;
    return s;
}

SteadyStateResult make_result(const SpaserState& s, const ModelParams& params, double nu,
                              SteadyMethod method) {
    SteadyStateResult r;
    r.plasmon_number = s.plasmon_number();
    r.amplitude = s.amplitude.real();
    r.rho = s.rho;
    r.n21 = s.rho.rho22 - s.rho.rho11;
    r.n32 = s.rho.rho33 - s.rho.rho22;
    r.nu_s = nu;
    r.method = method;
    r.residual_norm = stationarity_residual(s, params, nu);
    return r;
}

SteadyStateResult zero_branch(const ModelParams& params) {
    SpaserState s;
    s.rho = background_state(params);
    const double nu = with_spasing_frame(params).frame.nu_ref;
    auto r = make_result(s, params, nu, SteadyMethod::AlgebraicRoot);
    r.converged = true;
    return r;
}

bool physical(const SpaserState& s) {
    constexpr double tol = 1e-9;
    for (double p : {s.rho.rho11, s.rho.rho22, s.rho.rho33})
        if (!(p >= -tol && p <= 1.0 + tol)) return false;
    return true;
}

struct Observed {
    std::array<double, 7> q;
};

Observed observe(const StateVector& y) {
    return {{y[9] * y[9] + y[10] * y[10], y[0], y[1], y[2], std::hypot(y[3], y[4]),
             std::hypot(y[5], y[6]), std::hypot(y[7], y[8])}};
}

bool settled(const Observed& a, const Observed& b, double tol) {
    if (std::abs(a.q[0] - b.q[0]) > tol * (std::abs(b.q[0]) + 1e-12)) return false;
    for (std::size_t i = 1; i < a.q.size(); ++i)
        if (std::abs(a.q[i] - b.q[i]) > tol * (std::abs(b.q[i]) + 1e-6)) return false;
    return true;
}

}  // namespace

const char* to_string(SteadyMethod m) {
    return m == SteadyMethod::OdeRelaxation ? "ode-relaxation" : "algebraic-root";
}

double stationarity_residual(const SpaserState& state, const ModelParams& params, double nu) {
    const ModelParams p = with_frame(params, nu);
    const ReducedVector f = rhs_reduced(pack_reduced(state), p);
    return f.cwiseAbs().maxCoeff() / (rate_scale(p) * std::max(1.0, std::abs(state.amplitude)));
}

SteadyStateResult relax_to_steady_state(const SpaserState& initial, const ModelParams& params,
                                        const SteadyStateOptions& options) {
    validate(params);
    const double scale = rate_scale(params);

    // Chunk length from the slowest decay of the plasmon-free point.
    double slow = scale;
    for (const cplx& ev : growth_rate(params).eigenvalues) {
        const double re = std::abs(ev.real());
        if (re > 1e-9 * scale) slow = std::min(slow, re);
    }
    double chunk = 5.0 / slow;

    Integrator integ(params, options.relax_controls, initial);
    Observed prev = observe(integ.vector());
    int quiet = 0;
    bool converged = false;
    while (integ.accepted_steps() + integ.rejected_steps() < options.relax_controls.max_steps) {
        try {
            integ.advance(integ.time() + chunk);
        } catch (const IntegrationError& e) {
            if (e.kind() == IntegrationError::Kind::StepLimit) break;
            throw;
        }
        const Observed now = observe(integ.vector());
        quiet = settled(prev, now, options.relax_tol) ? quiet + 1 : 0;
        prev = now;
        if (quiet >= 2) {
            converged = true;
            break;
        }
        chunk *= 1.25;
    }

    const SpaserState raw = integ.state();
    double nu = params.frame.nu_ref;
    if (std::abs(raw.amplitude) > 0.0) {
        const StateVector dy = rhs(integ.vector(), params, complex_rates(params));
        const cplx adot{dy[9], dy[10]};
        nu += -(adot / raw.amplitude).imag();
    }
    auto r = make_result(fix_gauge(raw), params, nu, SteadyMethod::OdeRelaxation);
    r.converged = converged;
    if (!converged) r.warnings.push_back("ode relaxation: observables did not settle");
    return r;
}

namespace {

// At fixed plasmon number N and frame nu the medium settles to a unique state, so
// the spasing state reduces to the complex gain balance
//   G(N, nu) = i N_p omega_b rho21 / a - Gamma_n = 0,   a = sqrt(N),
// solved for u = (ln N, (nu - nu0) / scale).
using Vec2 = Eigen::Vector2d;

struct GainBalance {
    const ModelParams& params;
    double nu0;
    double scale;

    SpaserState state(const Vec2& u) const {
        SpaserState s;
        s.amplitude = std::exp(0.5 * u[0]);
        s.rho = medium_state(with_frame(params, frame(u)), s.amplitude.real());
        return s;
    }
    double frame(const Vec2& u) const { return nu0 + u[1] * scale; }
    Vec2 operator()(const Vec2& u) const {
        const ModelParams p = with_frame(params, frame(u));
        const SpaserState s = state(u);
        const cplx g = cplx{0.0, p.plasmon.n_p * p.plasmon.omega_b_single} * s.rho.rho21 /
                           s.amplitude - complex_rates(p).gamma_n;
        return Vec2{g.real(), g.imag()} / scale;
    }
};

struct RootOutcome {
    bool ok = false;
    Vec2 u;
};

RootOutcome solve_gain_balance(const GainBalance& balance, Vec2 u, double tol) {
    Vec2 f = balance(u);
    double norm = f.norm();
    for (int it = 0; it < 100 && std::isfinite(norm); ++it) {
        if (norm <= tol) return {true, u};
        Eigen::Matrix2d jac;
        for (int k = 0; k < 2; ++k) {
            const double h = 1e-6 * std::max(1.0, std::abs(u[k]));
            Vec2 up = u, um = u;
            up[k] += h;
            um[k] -= h;
            jac.col(k) = (balance(up) - balance(um)) / (2.0 * h);
        }
        Vec2 step = jac.fullPivLu().solve(-f);
        if (!step.allFinite()) break;
        // Residual at its rounding floor: the update no longer moves the root.
        if (step.cwiseAbs().maxCoeff() <= 1e-12 && norm <= 1e3 * tol) return {true, u};
        // Plasmon number changes by at most a factor e^4 per iteration.
        if (std::abs(step[0]) > 4.0) step *= 4.0 / std::abs(step[0]);

        bool improved = false;
        double lambda = 1.0;
        for (int ls = 0; ls < 40; ++ls, lambda *= 0.5) {
            const Vec2 trial = u + lambda * step;
            Vec2 ft;
            try {
                ft = balance(trial);
            } catch (const DegenerateParameters&) {
                continue;
            }
            const double nt = ft.norm();
            if (std::isfinite(nt) && nt < (1.0 - 1e-4 * lambda) * norm) {
                u = trial;
                f = ft;
                norm = nt;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return {};
}

}  // namespace

std::optional<SteadyStateResult> solve_spasing_root(const ModelParams& params,
                                                    const SteadyStateOptions& options) {
    validate(params);
    const double nu0 = with_spasing_frame(params).frame.nu_ref;
    const double scale = rate_scale(params);

    // Seed ladder: an energy-balance estimate first, then decades of plasmon number.
    std::vector<double> seeds;
    const auto& g = params.gain;
    const double flux = (g.pump_g - g.gamma21 - g.gamma31) / 3.0;
    if (flux > 0.0) seeds.push_back(params.plasmon.n_p * flux / (2.0 * params.plasmon.gamma_n));
    for (int k = 6; k >= -4; --k) seeds.push_back(std::pow(10.0, k));

    const GainBalance balance{params, nu0, scale};
    for (double n_seed : seeds) {
        const auto out = solve_gain_balance(balance, Vec2{std::log(n_seed), 0.0},
                                            options.newton_tol);
        if (!out.ok) continue;
        const SpaserState s = balance.state(out.u);
        if (!physical(s)) continue;
        const double nu = balance.frame(out.u);
        const double abscissa = spectrum_at(s, with_frame(params, nu), true).spectral_abscissa;
        const bool stable = abscissa <= 1e-9 * scale;
        if (!stable && options.require_stable) continue;

        auto r = make_result(s, params, nu, SteadyMethod::AlgebraicRoot);
        r.converged = true;
        r.spectral_abscissa = abscissa;
        r.linearly_stable = stable;
        return r;
    }
    return std::nullopt;
}

SteadyStateResult steady_state_numeric(const ModelParams& params, BranchHint hint,
                                       const SteadyStateOptions& options) {
    validate(params);
    if (hint == BranchHint::Zero) return zero_branch(params);

    const auto onset = growth_rate(params);
    if (!(onset.gamma_s > 0.0)) return zero_branch(params);

    SteadyStateOptions root_options = options;
    root_options.require_stable = false;
    auto root = solve_spasing_root(params, root_options);
    if (root && !root->linearly_stable) {
        std::ostringstream os;
        os << "stationary spasing state is linearly unstable (max Re lambda = "
           << root->spectral_abscissa << " rad/s); the long-time dynamics does not settle on it";
        root->warnings.push_back(os.str());
        return *root;
    }
    if (root && !options.cross_check) return *root;

    SpaserState initial;
    initial.rho = background_state(params);
    initial.amplitude = options.seed_amplitude;
    const ModelParams framed = with_spasing_frame(params);
    SteadyStateResult relaxed;
    bool relaxed_ok = false;
    try {
        relaxed = relax_to_steady_state(initial, framed, options);
        relaxed_ok = relaxed.converged;
    } catch (const Error& e) {
        relaxed.warnings.push_back(std::string("ode relaxation failed: ") + e.what());
    }

    if (root) {
        if (relaxed_ok) {
            root->cross_check_deviation =
                std::abs(relaxed.plasmon_number / root->plasmon_number - 1.0);
            if (root->cross_check_deviation > options.agreement_tol) {
                std::ostringstream os;
                os << "algebraic root and ode relaxation disagree on N_n by "
                   << root->cross_check_deviation;
                root->warnings.push_back(os.str());
            }
        } else {
            root->warnings.insert(root->warnings.end(), relaxed.warnings.begin(),
                                  relaxed.warnings.end());
        }
        return *root;
    }
    if (relaxed_ok) {
        relaxed.warnings.push_back("newton did not converge; using ode relaxation");
        return relaxed;
    }
    throw ConvergenceError("steady_state_numeric: neither newton nor ode relaxation converged");
}

}  // namespace spaser::analysis
