#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>

#include "CLI11.hpp"
#include "spaser/cli/commands.hpp"

namespace spaser::cli {

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

int run_app(int argc, char** argv) {
    CLI::App app{"Coherently driven three-level spaser: trajectories, steady states, thresholds"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path, out_path, format, preset;
    unsigned workers = 0;
    double tol = 0.0, seed = 0.0;
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--workers", workers, "worker threads (default: available parallelism)");
    app.add_option("--tol", tol, "relative tolerance of time integration (default 1e-6)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed-amplitude", seed, "initial plasmon amplitude (default 1e-3)")
        ->check(CLI::PositiveNumber);
    app.add_option("--preset", preset, "figure preset")
        ->check(CLI::IsMember({"fig2", "fig3", "fig4a", "fig4b"}));

    for (const char* name : {"trajectory", "steady-sweep", "threshold", "stability", "calibrate"})
        app.add_subcommand(name, std::string(name) + " table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    CommandResult result;
    RunOptions opts;
    try {
        RunConfig cfg = parse_config(config_path);
        if (!preset.empty()) apply_preset(cfg, preset);
        if (app.count("--out")) cfg.options.output = out_path;
        if (!format.empty()) cfg.options.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
        if (app.count("--workers")) cfg.options.workers = workers;
        if (app.count("--tol")) cfg.options.tol = tol;
        if (app.count("--seed-amplitude")) cfg.options.seed_amplitude = seed;
        opts = cfg.options;
        result = run_command(command, cfg);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    // The timestamp is the only line that changes between identical runs.
    auto& meta = result.table.metadata;
    meta.insert(meta.begin() + 2, {"timestamp", utc_timestamp()});
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    try {
        emit(result.table, opts.format, opts.output);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (result.unconverged > 0) {
        std::cerr << "spaser: " << result.unconverged << " of " << result.table.rows.size()
                  << " rows did not converge\n";
        return 2;
    }
    return 0;
}

}  // namespace spaser::cli
