#include "spaser/cli/commands.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "spaser/analysis/calibration.hpp"
#include "spaser/analysis/spasing.hpp"
#include "spaser/analysis/stability.hpp"
#include "spaser/analysis/steady_state.hpp"
#include "spaser/core/integrator.hpp"

#ifndef SPASER_VERSION
#define SPASER_VERSION "unknown"
#endif
#ifndef SPASER_GIT_DESCRIBE
#define SPASER_GIT_DESCRIBE "unknown"
#endif

namespace spaser::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Threshold searches give up above this pump.
constexpr double kPumpCeiling = 1e16;

std::string short_name(const std::string& path) { return path.substr(path.find('.') + 1); }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string point_label(const RunConfig& cfg, const std::vector<double>& point) {
    std::ostringstream os;
    for (std::size_t k = 0; k < point.size(); ++k)
        os << (k ? ", " : "") << cfg.sweep[k].path << " = " << point[k];
    return point.empty() ? "base point" : os.str();
}

void add_axis_columns(SweepTable& t, const RunConfig& cfg) {
    for (const auto& ax : cfg.sweep)
        t.add_column(short_name(ax.path), ax.path == "plasmon.n_p" ? "1" : "rad/s");
}

// Per-point outcome collected by the worker pool.
struct Slot {
    std::vector<std::vector<double>> rows;
    std::size_t unconverged = 0;
    std::vector<std::string> warnings;
};

CommandResult collect(SweepTable table, std::vector<Slot>& slots) {
    CommandResult out;
    out.table = std::move(table);
    for (auto& s : slots) {
        for (auto& r : s.rows) out.table.add_row(std::move(r));
        out.unconverged += s.unconverged;
        for (auto& w : s.warnings) out.warnings.push_back(std::move(w));
    }
    return out;
}

template <class Fn>
CommandResult sweep(const RunConfig& cfg, SweepTable table, Fn&& per_point) {
    const auto points = grid_points(cfg.sweep);
    std::vector<Slot> slots(points.size());
    run_indexed(points.size(), cfg.options.workers, [&](std::size_t i) {
        Slot& slot = slots[i];
        const ModelParams params = point_params(cfg, points[i]);
        try {
            per_point(points[i], params, slot);
        } catch (const std::exception& e) {
            ++slot.unconverged;
            slot.warnings.push_back(point_label(cfg, points[i]) + ": " + e.what());
            std::vector<double> row(points[i]);
            row.resize(table.columns.size(), kNaN);
            row.back() = 0.0;
            slot.rows = {std::move(row)};
        }
    });
    return collect(std::move(table), slots);
}

void prefix(Slot& slot, const RunConfig& cfg, const std::vector<double>& point,
            const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) slot.warnings.push_back(point_label(cfg, point) + ": " + w);
}

// Lowest onset bracket in [lo, hi], growing hi up to kPumpCeiling.
std::optional<std::array<double, 2>> find_onset(const ModelParams& p, double lo, double& hi) {
    for (;;) {
        try {
            return analysis::bracket_threshold(p, lo, hi);
        } catch (const analysis::NoSignChange&) {
            if (hi >= kPumpCeiling) return std::nullopt;
            hi = std::min(4.0 * hi, kPumpCeiling);
        }
    }
}

double onset_only(const ModelParams& p, double lo, double hi) {
    const auto br = find_onset(p, lo, hi);
    return br ? analysis::threshold_find(p, *br).g_th : kNaN;
}

}  // namespace

std::vector<std::vector<double>> grid_points(const std::vector<SweepAxis>& axes) {
    std::vector<std::vector<double>> out{{}};
    for (const auto& ax : axes) {
        std::vector<std::vector<double>> next;
        for (const auto& head : out) {
            for (double v : ax.grid()) {
                auto p = head;
                p.push_back(v);
                next.push_back(std::move(p));
            }
        }
        out = std::move(next);
    }
    return out;
}

ModelParams point_params(const RunConfig& cfg, const std::vector<double>& point) {
    ModelParams p = cfg.model;
    bool frame_swept = false;
    for (std::size_t k = 0; k < point.size(); ++k) {
        parameter(p, cfg.sweep[k].path) = point[k];
        frame_swept |= cfg.sweep[k].path == "frame.nu_ref";
    }
    if (cfg.frame_auto && !frame_swept) p = analysis::with_spasing_frame(p);
    return p;
}

void run_indexed(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& task) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t threads = std::min<std::size_t>(workers, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < n; i = next++) task(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

CommandResult cmd_trajectory(const RunConfig& cfg) {
    SweepTable table;
    add_axis_columns(table, cfg);
    table.add_column("t", "s");
    for (const char* name : {"N_n", "rho11", "rho22", "rho33", "re_rho21", "im_rho21", "trace_err"})
        table.add_column(name, "1");
    table.add_column("converged", "flag");

    const auto& o = cfg.options;
    IntegratorControls controls;
    controls.rel_tol = o.tol;
    controls.abs_tol = 1e-3 * o.tol;
    const double interval = o.sample_interval > 0.0 ? o.sample_interval : o.t_end / 2000.0;

    return sweep(cfg, std::move(table), [&](const std::vector<double>& point,
                                            const ModelParams& params, Slot& slot) {
        SpaserState s0;
        s0.amplitude = o.seed_amplitude;
        auto record = [&](double t, const StateVector& y) {
            const SpaserState s = unpack(y);
            std::vector<double> row(point);
            row.insert(row.end(), {t, s.plasmon_number(), s.rho.rho11, s.rho.rho22, s.rho.rho33,
                                   s.rho.rho21.real(), s.rho.rho21.imag(),
                                   std::abs(s.rho.trace() - 1.0), 1.0});
            slot.rows.push_back(std::move(row));
        };
        prefix(slot, cfg, point, sanity_warnings(params));
        Integrator integ(params, controls, s0);
        record(0.0, integ.vector());
        double last = 0.0;
        try {
            integ.advance(o.t_end, [&](double t, const StateVector& y) {
                if (t - last >= interval || t == o.t_end) {
                    record(t, y);
                    last = t;
                }
            });
        } catch (const IntegrationError& e) {
            ++slot.unconverged;
            prefix(slot, cfg, point, {e.what()});
            std::vector<double> row(point);
            row.insert(row.end(), {e.time(), kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, 0.0});
            slot.rows.push_back(std::move(row));
        }
    });
}

CommandResult cmd_steady_sweep(const RunConfig& cfg) {
    if (cfg.sweep.empty() || cfg.sweep.size() > 3)
        throw UsageError("steady-sweep needs 1 to 3 sweep axes");
    SweepTable table;
    add_axis_columns(table, cfg);
    for (const char* name : {"N_n", "n21", "n32", "rho11", "rho22", "rho33"}) table.add_column(name, "1");
    table.add_column("nu_s", "rad/s");
    table.add_column("stable", "flag");
    table.add_column("converged", "flag");

    analysis::SteadyStateOptions opts;
    opts.seed_amplitude = cfg.options.seed_amplitude;
    opts.cross_check = cfg.options.cross_check;

    return sweep(cfg, std::move(table), [&](const std::vector<double>& point,
                                            const ModelParams& params, Slot& slot) {
        const auto r = analysis::steady_state_numeric(params, analysis::BranchHint::Spasing, opts);
        prefix(slot, cfg, point, r.warnings);
        if (!r.converged) ++slot.unconverged;
        std::vector<double> row(point);
        row.insert(row.end(), {r.plasmon_number, r.n21, r.n32, r.rho.rho11, r.rho.rho22, r.rho.rho33,
                               r.nu_s, r.linearly_stable ? 1.0 : 0.0, r.converged ? 1.0 : 0.0});
        slot.rows = {std::move(row)};
    });
}

CommandResult cmd_threshold(const RunConfig& cfg) {
    SweepTable table;
    add_axis_columns(table, cfg);
    table.add_column("g_th_onset", "rad/s");
    table.add_column("g_th_growth", "rad/s");
    table.add_column("nu_s", "rad/s");
    table.add_column("ratio_to_undriven", "1");
    table.add_column("has_threshold", "flag");
    table.add_column("consistent", "flag");
    table.add_column("converged", "flag");

    const double lo = cfg.options.g_lo;
    return sweep(cfg, std::move(table), [&](const std::vector<double>& point,
                                            const ModelParams& params, Slot& slot) {
        std::vector<double> row(point);
        double hi = cfg.options.g_hi;
        const auto br = find_onset(params, lo, hi);
        if (!br) {
            row.insert(row.end(), {kNaN, kNaN, kNaN, kNaN, 0.0, 0.0, 1.0});
            slot.rows = {std::move(row)};
            return;
        }
        const auto th = analysis::threshold_find(params, *br);
        double growth = kNaN;
        try {
            growth = analysis::threshold_from_growth_rate(params, {lo, hi});
        } catch (const analysis::NoSignChange&) {
        }
        const bool consistent = std::abs(growth / th.g_th - 1.0) <= 0.01;
        if (!consistent) {
            std::ostringstream os;
            os << "threshold estimators disagree by more than 1% (onset " << th.g_th << ", growth "
               << growth << ")";
            prefix(slot, cfg, point, {os.str()});
        }
        ModelParams undriven = params;
        undriven.drive.omega_a_rabi = 0.0;
        const double g_off = onset_only(undriven, lo, cfg.options.g_hi);
        row.insert(row.end(), {th.g_th, growth, th.nu_s, g_off / th.g_th, 1.0,
                               consistent ? 1.0 : 0.0, 1.0});
        slot.rows = {std::move(row)};
    });
}

CommandResult cmd_stability(const RunConfig& cfg) {
    SweepTable table;
    add_axis_columns(table, cfg);
    auto swept = [&](const char* path) {
        return std::any_of(cfg.sweep.begin(), cfg.sweep.end(),
                           [&](const SweepAxis& a) { return a.path == path; });
    };
    const bool add_drive = !swept("drive.omega_a_rabi");
    const bool add_pump = !swept("gain.pump_g");
    if (add_drive) table.add_column("omega_a_rabi", "rad/s");
    if (add_pump) table.add_column("pump_g", "rad/s");
    table.add_column("gamma_s", "rad/s");
    table.add_column("gamma_s_over_gamma_n", "1");
    table.add_column("re_lambda", "rad/s");
    table.add_column("im_lambda", "rad/s");
    table.add_column("converged", "flag");

    return sweep(cfg, std::move(table), [&](const std::vector<double>& point,
                                            const ModelParams& params, Slot& slot) {
        const auto s = analysis::growth_rate(params);
        std::vector<double> row(point);
        if (add_drive) row.push_back(params.drive.omega_a_rabi);
        if (add_pump) row.push_back(params.gain.pump_g);
        row.insert(row.end(), {s.gamma_s, s.gamma_s_over_gamma_n, s.leading_eigenvalue.real(),
                               s.leading_eigenvalue.imag(), 1.0});
        slot.rows = {std::move(row)};
    });
}

CommandResult cmd_calibrate(const RunConfig& cfg) {
    CommandResult out;
    if (!cfg.sweep.empty()) out.warnings.push_back("calibrate ignores the sweep axes");
    SweepTable& t = out.table;
    t.add_column("omega_b_single", "rad/s");
    t.add_column("ratio", "1");
    t.add_column("g_th_off", "rad/s");
    t.add_column("g_th_on", "rad/s");
    t.add_column("iterations", "1");
    t.add_column("converged", "flag");

    const analysis::CalibrationTargets targets;
    try {
        const auto r = analysis::calibrate_coupling(targets, cfg.model);
        t.add_row({r.omega_b_single, r.achieved_ratio, r.g_th_off, r.g_th_on,
                   static_cast<double>(r.iterations), 1.0});
        t.metadata.emplace_back("calibrated.omega_b_single", num(r.omega_b_single));
    } catch (const analysis::CalibrationError& e) {
        out.warnings.push_back(e.what());
        for (const auto& [ob, ratio] : e.ratio_curve()) t.add_row({ob, ratio, kNaN, kNaN, kNaN, 0.0});
        out.unconverged = t.rows.size();
    } catch (const ConvergenceError& e) {
        out.warnings.push_back(e.what());
        t.add_row({kNaN, kNaN, kNaN, kNaN, kNaN, 0.0});
        out.unconverged = 1;
    }
    return out;
}

CommandResult run_command(const std::string& name, const RunConfig& cfg) {
    CommandResult r;
    if (name == "trajectory") r = cmd_trajectory(cfg);
    else if (name == "steady-sweep") r = cmd_steady_sweep(cfg);
    else if (name == "threshold") r = cmd_threshold(cfg);
    else if (name == "stability") r = cmd_stability(cfg);
    else if (name == "calibrate") r = cmd_calibrate(cfg);
    else throw UsageError("unknown command '" + name + "'");
    stamp_metadata(r.table, cfg, name);
    return r;
}

void stamp_metadata(SweepTable& table, const RunConfig& cfg, const std::string& command) {
    std::vector<std::pair<std::string, std::string>> m = {
        {"command", command},
        {"version", SPASER_VERSION},
        {"git_describe", SPASER_GIT_DESCRIBE},
        {"config_hash", cfg.source_hash},
    };
    if (!cfg.preset.empty()) m.emplace_back("preset", cfg.preset);
    for (const auto& path : parameter_paths()) {
        if (path == "frame.nu_ref" && cfg.frame_auto) {
            m.emplace_back("param.frame.nu_ref", "auto");
            continue;
        }
        m.emplace_back("param." + path, num(parameter(cfg.model, path)));
    }
    for (std::size_t k = 0; k < cfg.sweep.size(); ++k) {
        const auto& ax = cfg.sweep[k];
        std::string desc = ax.path + " [";
        const auto g = ax.grid();
        for (std::size_t i = 0; i < g.size(); ++i) desc += (i ? " " : "") + num(g[i]);
        m.emplace_back("sweep." + std::to_string(k), desc + "]");
    }
    const auto& o = cfg.options;
    m.emplace_back("option.tol", num(o.tol));
    m.emplace_back("option.seed_amplitude", num(o.seed_amplitude));
    m.emplace_back("option.t_end", num(o.t_end));
    m.emplace_back("option.sample_interval", num(o.sample_interval));
    m.emplace_back("option.g_bracket", num(o.g_lo) + " " + num(o.g_hi));
    m.emplace_back("option.cross_check", o.cross_check ? "true" : "false");
    for (const auto& [k, v] : cfg.notes) m.emplace_back("note." + k, v);
    m.insert(m.end(), table.metadata.begin(), table.metadata.end());
    table.metadata = std::move(m);
}

}  // namespace spaser::cli
