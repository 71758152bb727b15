// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spaser/analysis/closed_form.hpp"
#include "spaser/analysis/limits.hpp"
#include "spaser/analysis/spasing.hpp"
#include "spaser/analysis/stability.hpp"
#include "spaser/analysis/steady_state.hpp"
#include "spaser/cli/commands.hpp"
#include "spaser/core/dynamics.hpp"
#include "spaser/core/integrator.hpp"

using namespace spaser;
using namespace spaser::analysis;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Largest trace error seen by any trajectory of the suite (criterion 2).
double g_max_trace_error = 0.0;
std::size_t g_trajectories = 0;

IntegratorControls tight_controls() {
    IntegratorControls c;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-13;
    c.max_step = std::numeric_limits<double>::infinity();
    return c;
}

// 1. Closed-form inversions against long-time integration of the plasmon-free medium.
Outcome closed_form_oracle() {
    constexpr int kSets = 100;
    constexpr double kTol = 1e-6;
    // Inversions smaller than this are compared in absolute terms.
    constexpr double kFloor = 1e-3;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    double worst = 0.0;
    for (int k = 0; k < kSets; ++k) {
        const ModelParams p = testing::random_medium(rng);
        double slowest = std::numeric_limits<double>::infinity();
        for (const cplx& ev : growth_rate(p).eigenvalues)
            if (ev.real() < 0.0) slowest = std::min(slowest, -ev.real());
        Integrator integ(p, tight_controls(), SpaserState{});
        integ.advance(25.0 / slowest);
        g_max_trace_error = std::max(g_max_trace_error, integ.max_trace_error());
        ++g_trajectories;

        const SpaserState s = integ.state();
        const auto inv = steady_inversions_closed_form(p);
        const double e21 = std::abs(s.rho.rho22 - s.rho.rho11 - inv.n21_bar) / std::max(std::abs(inv.n21_bar), kFloor);
        const double e32 = std::abs(s.rho.rho33 - s.rho.rho22 - inv.n32_bar) / std::max(std::abs(inv.n32_bar), kFloor);
        worst = std::max({worst, e21, e32});
    }
    const double secs = seconds_since(t0);
    return {worst <= kTol && secs <= 60.0,
            fmt("%d sets, max rel err %.3g (tol %.0e, floor %.0e), %.1f s (limit 60 s)", kSets, worst, kTol,
                kFloor, secs)};
}

// 3. Onset-condition threshold vs growth-rate sign change on a 10-point drive grid.
Outcome threshold_cross_validation() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    int n = 0;
    for (int i = 0; i < 10; ++i) {
        ModelParams p = default_model_params();
        p.drive.omega_a_rabi = 24e12 * i / 9.0;
        const ThresholdResult t = threshold_find(p, {1e9, 2e13});
        worst = std::max(worst, std::abs(t.g_th_growth / t.g_th - 1.0));
        ++n;
    }
    const double secs = seconds_since(t0);
    return {worst <= 0.01 && secs <= 30.0,
            fmt("%d drive values in [0, 24e12], max |g_growth/g_onset - 1| = %.3g (tol 1e-2), %.2f s", n, worst,
                secs)};
}

// 4. Undriven onset condition vs an independently coded two-level condition.
Outcome two_level_reduction() {
    std::mt19937_64 rng(77);
    double worst = 0.0;
    int n = 0;
    for (int k = 0; k < 50; ++k) {
        ModelParams p = default_model_params();
        p.drive.omega_a_rabi = 0.0;
        p.gain.pump_g = testing::log_uniform(rng, 1e11, 2e13);
        p.gain.gamma32 = 100.0 * p.gain.pump_g;
        p.gain.gamma_ph = testing::log_uniform(rng, 1e10, 1e14);
        const double nu = p.plasmon.omega_n +
                          std::uniform_real_distribution<double>(0.0, 1.0)(rng) * (p.gain.omega21 - p.plasmon.omega_n);
        const cplx a = spasing_condition_residual(p, nu);
        const cplx b = testing::two_level_condition(p, nu);
        // Relative to the condition itself (residual + 1).
        worst = std::max(worst, std::abs(a - b) / std::abs(b + 1.0));
        ++n;
    }
    return {worst <= 1e-12, fmt("%d points, gamma32 = 100 g, max rel diff %.3g (tol 1e-12)", n, worst)};
}

// 5. Steady plasmon number against the strong- and weak-drive limits.
Outcome analytic_limits() {
    ModelParams base = default_model_params();
    base.gain.gamma21 = 4e12;
    base.gain.gamma32 = 1e11;
    base.gain.gamma31 = 1e8;
    base.gain.gamma_ph = 0.0;
    base.plasmon.gamma_n = 1e12;
    base.plasmon.omega_n = base.gain.omega21;
    base.plasmon.omega_b_single = 1e13;

    SteadyStateOptions o;
    o.cross_check = false;
    bool regime_ok = true;
    std::string detail;
    double worst_all = 0.0;
    for (const auto& [label, oa] : {std::pair{"strong", 4e14}, std::pair{"weak", 4e10}}) {
        double worst = 0.0;
        std::string at;
        for (double f : {1.1, 1.2, 1.3, 1.4, 1.5}) {
            ModelParams p = base;
            p.drive.omega_a_rabi = oa;
            p.gain.pump_g = f * p.gain.gamma21;
            const LimitEstimate lim =
                std::string(label) == "strong" ? limit_strong_drive(p) : limit_weak_drive(p);
            regime_ok = regime_ok && lim.warnings.empty();
            const double n = steady_state_numeric(with_spasing_frame(p), BranchHint::Spasing, o).plasmon_number;
            const double err = std::abs(n / lim.plasmon_number - 1.0);
            if (err >= worst) {
                worst = err;
                at = fmt("g = %.1f gamma21, N = %.4g vs %.4g", f, n, lim.plasmon_number);
            }
        }
        worst_all = std::max(worst_all, worst);
        detail += fmt("; %s drive (Omega_a = %.0e): max rel dev %.3g at %s", label, oa, worst, at.c_str());
    }
    return {regime_ok && worst_all <= 0.2,
            fmt("regime orderings %s, tol 0.2", regime_ok ? "met" : "NOT met") + detail};
}

// 6. Frequency pulling.
Outcome frequency_formula() {
    double worst_formula = 0.0;
    for (double g : {1e12, 4.4e12, 8e12, 2e13}) {
        for (double gph : {0.0, 80e12}) {
            ModelParams p = default_model_params();
            p.drive.omega_a_rabi = 0.0;
            p.gain.pump_g = g;
            p.gain.gamma_ph = gph;
            const double w21 = 0.5 * (p.gain.gamma21 + g) + gph;
            const double gn = p.plasmon.gamma_n;
            const double expected = (gn * p.gain.omega21 + w21 * p.plasmon.omega_n) / (gn + w21);
            const double got = spasing_frequency_closed_form(p);
            worst_formula = std::max(worst_formula, std::abs(got - expected) / expected);
        }
    }
    double worst_im = 0.0;
    for (double oa : {4e12, 16e12, 24e12, 1e14}) {
        for (double g : {4.4e12, 8e12}) {
            ModelParams p = default_model_params();
            p.drive.omega_a_rabi = oa;
            p.gain.pump_g = g;
            worst_im = std::max(worst_im, std::abs(spasing_condition_residual(p, spasing_frequency(p)).imag()));
        }
    }
    const double eps = std::numeric_limits<double>::epsilon();
    return {worst_formula <= 4 * eps && worst_im <= 1e-9,
            fmt("Omega_a = 0: max rel diff %.3g (tol 4 eps); Omega_a > 0: max |Im residual| %.3g (tol 1e-9)",
                worst_formula, worst_im)};
}

cli::SweepTable steady_sweep(const std::string& preset, unsigned workers) {
    cli::RunConfig c = cli::parse_config_text("{}", "acceptance");
    cli::apply_preset(c, preset);
    c.options.workers = workers;
    return cli::run_command("steady-sweep", c).table;
}

// 7. Threshold ordering and inversion-free spasing under the drive.
Outcome fig2_suite() {
    std::vector<double> g_th;
    const std::vector<double> drives{0.0, 4e12, 16e12};
    for (double oa : drives) {
        ModelParams p = default_model_params();
        p.gain.gamma_ph = 0.0;
        p.drive.omega_a_rabi = oa;
        g_th.push_back(threshold_find(p, {1e9, 2e13}).g_th);
    }
    const bool decreasing = g_th[0] > g_th[1] && g_th[1] > g_th[2];
    const double ratio = g_th[0] / g_th[2];

    const cli::SweepTable t = steady_sweep("fig2", 0);
    const auto oa = t.column("omega_a_rabi");
    const auto pump = t.column("pump_g");
    const auto n = t.column("N_n");
    const auto n21 = t.column("n21");
    const auto r11 = t.column("rho11"), r22 = t.column("rho22"), r33 = t.column("rho33");
    std::vector<double> n_top;
    int lwi = 0, lwi_bad = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (pump[i] == 2e13) n_top.push_back(n[i]);
        if (oa[i] == 16e12 && n[i] > 0.0 && n21[i] < 0.0) {
            ++lwi;
            if (!(r22[i] + r33[i] > r11[i])) ++lwi_bad;
        }
    }
    const bool n_increasing = n_top.size() == 3 && n_top[0] < n_top[1] && n_top[1] < n_top[2];
    const bool ok = decreasing && std::abs(ratio - 2.0) <= 0.05 && n_increasing && lwi > 0 && lwi_bad == 0;
    return {ok, fmt("g_th = %.4g, %.4g, %.4g; ratio %.4f (2 +- 0.05); N(g=2e13) = %.4g, %.4g, %.4g; "
                    "%d spasing points with n21 < 0, %d violating rho22+rho33 > rho11",
                    g_th[0], g_th[1], g_th[2], ratio, n_top.size() > 0 ? n_top[0] : NAN,
                    n_top.size() > 1 ? n_top[1] : NAN, n_top.size() > 2 ? n_top[2] : NAN, lwi, lwi_bad)};
}

// 8. Dephasing ordering.
Outcome fig3_suite() {
    const cli::SweepTable t = steady_sweep("fig3", 0);
    const auto gph = t.column("gamma_ph");
    const auto pump = t.column("pump_g");
    const auto n = t.column("N_n");
    const auto stable = t.column("stable");
    const std::vector<double> levels{0.0, 80e12, 160e12, 240e12};
    const std::size_t per = t.rows.size() / levels.size();
    int violations = 0;
    // Violations where both roots are linearly stable, i.e. reached by the dynamics.
    int stable_violations = 0;
    std::string first;
    for (std::size_t j = 0; j < per; ++j) {
        for (std::size_t k = 1; k < levels.size(); ++k) {
            const std::size_t lo = (k - 1) * per + j, hi = k * per + j;
            if (n[hi] > n[lo]) {
                if (violations == 0)
                    first = fmt("g = %.3g: N(gamma_ph = %.3g) = %.5g > N(gamma_ph = %.3g) = %.5g", pump[hi],
                                gph[hi], n[hi], gph[lo], n[lo]);
                ++violations;
                if (stable[hi] == 1.0 && stable[lo] == 1.0) ++stable_violations;
            }
        }
    }
    bool lasing_80 = false;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (gph[i] == 80e12 && n[i] > 0.0) lasing_80 = true;
    return {violations == 0 && lasing_80,
            fmt("%d pointwise increases with gamma_ph (%d between linearly stable states)%s%s; N > 0 at "
                "gamma_ph = 80e12: %s",
                violations, stable_violations, violations ? ", first at " : "", first.c_str(),
                lasing_80 ? "yes" : "no")};
}

// 9. Growth rate vs pump, and onset time vs drive.
Outcome fig4_suite() {
    std::vector<double> gs;
    for (double g : {4.4e12, 6e12, 8e12}) {
        ModelParams p = default_model_params();
        p.gain.gamma_ph = 0.0;
        p.drive.omega_a_rabi = 16e12;
        p.gain.pump_g = g;
        gs.push_back(growth_rate(with_spasing_frame(p)).gamma_s_over_gamma_n);
    }
    const bool rising = gs[0] < gs[1] && gs[1] < gs[2];

    std::vector<double> t99;
    for (double oa : {0.0, 24e12}) {
        ModelParams p = default_model_params();
        p.gain.gamma_ph = 0.0;
        p.gain.pump_g = 8e12;
        p.drive.omega_a_rabi = oa;
        p = with_spasing_frame(p);
        SteadyStateOptions o;
        o.cross_check = false;
        const double n_ss = steady_state_numeric(p, BranchHint::Spasing, o).plasmon_number;
        SpaserState s;
        s.amplitude = 1e-3;
        IntegratorControls c;
        c.rel_tol = 1e-8;
        c.abs_tol = 1e-11;
        Integrator integ(p, c, s);
        double hit = NAN;
        integ.advance(2e-11, [&](double t, const StateVector& y) {
            if (std::isnan(hit) && y[9] * y[9] + y[10] * y[10] >= 0.99 * n_ss) hit = t;
        });
        g_max_trace_error = std::max(g_max_trace_error, integ.max_trace_error());
        ++g_trajectories;
        t99.push_back(hit);
    }
    const bool earlier = std::isfinite(t99[1]) && (std::isnan(t99[0]) || t99[1] < t99[0]);
    return {rising && earlier,
            fmt("gamma_s/gamma_n at Omega_a = 16e12: %.4g, %.4g, %.4g; t99 = %.4g s (Omega_a = 0), %.4g s "
                "(Omega_a = 24e12)",
                gs[0], gs[1], gs[2], t99[0], t99[1])};
}

// 10. Analytic Jacobian vs central differences.
Outcome jacobian_check() {
    std::mt19937_64 rng(1234);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        ModelParams p = testing::random_medium(rng);
        p.plasmon.omega_b_single = testing::log_uniform(rng, 1e12, 1e14);
        p.drive.delta_a = std::uniform_real_distribution<double>(-1e13, 1e13)(rng);
        p.frame.nu_ref = p.gain.omega21 - std::uniform_real_distribution<double>(0.0, 5e12)(rng);
        worst = std::max(worst, testing::jacobian_fd_error(testing::random_state(rng), p));
    }
    return {worst <= 1e-6, fmt("20 random states, max rel err %.3g (tol 1e-6)", worst)};
}

// 11. Worker count does not change results.
Outcome determinism() {
    const auto a = steady_sweep("fig2", 1);
    const auto b = steady_sweep("fig2", 8);
    return {cli::identical(a, b), fmt("fig2 steady-sweep, 1 vs 8 workers, %zu rows", a.rows.size())};
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> fn;
        Outcome outcome;
    };
    // Conservation is evaluated last so that it covers every trajectory above it.
    std::vector<Entry> entries{
        {1, "closed-form oracle", closed_form_oracle, {}},
        {3, "threshold cross-validation", threshold_cross_validation, {}},
        {4, "two-level reduction", two_level_reduction, {}},
        {5, "analytic limits", analytic_limits, {}},
        {6, "frequency formula", frequency_formula, {}},
        {7, "drive suite", fig2_suite, {}},
        {8, "dephasing suite", fig3_suite, {}},
        {9, "growth and onset suite", fig4_suite, {}},
        {10, "Jacobian", jacobian_check, {}},
        {11, "determinism", determinism, {}},
        {2, "conservation",
         [] {
             return Outcome{g_max_trace_error <= 1e-6,
                            fmt("%zu trajectories, max |trace - 1| = %.3g (tol 1e-6); Hermitian by storage",
                                g_trajectories, g_max_trace_error)};
         },
         {}},
    };
    for (auto& e : entries) {
        try {
            e.outcome = e.fn();
        } catch (const std::exception& ex) {
            e.outcome = {false, std::string("exception: ") + ex.what()};
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.id < b.id; });
    int failed = 0;
    for (const auto& e : entries) {
        if (!e.outcome.pass) ++failed;
        std::printf("%s criterion %d (%s): %s\n", e.outcome.pass ? "PASS" : "FAIL", e.id, e.name,
                    e.outcome.detail.c_str());
    }
    std::printf("%d of %zu criteria failed, %.1f s\n", failed, entries.size(), seconds_since(t0));
    return failed == 0 ? 0 : 1;
}
