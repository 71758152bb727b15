#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spaser/analysis/steady_state.hpp"
#include "spaser/cli/commands.hpp"

using namespace spaser;
using namespace spaser::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string drop_timestamp(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (line.rfind("# timestamp: ", 0) != 0) out += line + "\n";
    return out;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "spaser_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "spaser");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_app(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("grid points vary the first axis slowest") {
    std::vector<SweepAxis> axes(2);
    axes[0].values = {1, 2};
    axes[1].values = {10, 20, 30};
    const auto pts = grid_points(axes);
    REQUIRE(pts.size() == 6);
    CHECK(pts[0] == std::vector<double>{1, 10});
    CHECK(pts[2] == std::vector<double>{1, 30});
    CHECK(pts[3] == std::vector<double>{2, 10});
    CHECK(grid_points({}).size() == 1);
}

TEST_CASE("run_indexed visits every index once") {
    std::vector<int> hits(1000, 0);
    run_indexed(hits.size(), 7, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("steady-sweep is independent of the worker count") {
    RunConfig c = parse_config_text("{}");
    apply_preset(c, "fig2");
    c.options.workers = 1;
    const auto one = run_command("steady-sweep", c);
    c.options.workers = 8;
    const auto many = run_command("steady-sweep", c);
    CHECK(identical(one.table, many.table));
    CHECK(one.table.rows.size() == 3 * 41);
    CHECK(one.unconverged == 0);
}

TEST_CASE("threshold without coupling reports no threshold") {
    RunConfig c = parse_config_text(R"({"plasmon": {"omega_b_single": 0},
                                        "sweep": [{"path": "drive.omega_a_rabi", "values": [0, 16e12]}]})");
    const auto r = run_command("threshold", c);
    REQUIRE(r.table.rows.size() == 2);
    for (double v : r.table.column("has_threshold")) CHECK(v == 0.0);
    for (double v : r.table.column("g_th_onset")) CHECK(std::isnan(v));
    for (double v : r.table.column("converged")) CHECK(v == 1.0);
    CHECK(r.unconverged == 0);
}

TEST_CASE("threshold ratio column at the calibrated coupling") {
    RunConfig c = parse_config_text(R"({"sweep": [{"path": "drive.omega_a_rabi", "values": [0, 16e12]}]})");
    const auto r = run_command("threshold", c);
    const auto ratio = r.table.column("ratio_to_undriven");
    CHECK(ratio[0] == doctest::Approx(1.0));
    CHECK(ratio[1] == doctest::Approx(1.9914).epsilon(1e-4));
    for (double v : r.table.column("consistent")) CHECK(v == 1.0);
}

TEST_CASE("stability without coupling gives gamma_s / gamma_n = -1") {
    RunConfig c = parse_config_text(R"({"plasmon": {"omega_b_single": 0}, "frame": {"nu_ref": 3.8e15},
                                        "sweep": [{"path": "gain.pump_g", "values": [1e12, 8e12]}]})");
    const auto r = run_command("stability", c);
    for (double v : r.table.column("gamma_s_over_gamma_n")) CHECK(v == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("trajectory without coupling decays at 2 gamma_n") {
    RunConfig c = parse_config_text(R"({"plasmon": {"omega_b_single": 0}, "frame": {"nu_ref": 3.8e15},
                                        "options": {"t_end": {"value": 10, "unit": "fs"}, "tol": 1e-10}})");
    const auto r = run_command("trajectory", c);
    const auto t = r.table.column("t");
    const auto n = r.table.column("N_n");
    REQUIRE(t.size() > 10);
    const double n0 = c.options.seed_amplitude * c.options.seed_amplitude;
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(n[i] == doctest::Approx(n0 * std::exp(-2.0 * c.model.plasmon.gamma_n * t[i])).epsilon(1e-7));
    for (double v : r.table.column("trace_err")) CHECK(v <= 1e-12);
}

TEST_CASE("trajectory settles on the steady state") {
    RunConfig c = parse_config_text(R"({"options": {"t_end": {"value": 60, "unit": "ps"}}})");
    const auto r = run_command("trajectory", c);
    CHECK(r.unconverged == 0);
    analysis::SteadyStateOptions o;
    o.cross_check = false;
    const double n_ss = analysis::steady_state_numeric(default_model_params(), analysis::BranchHint::Spasing, o)
                            .plasmon_number;
    CHECK(r.table.column("N_n").back() == doctest::Approx(n_ss).epsilon(1e-2));
}

TEST_CASE("metadata") {
    RunConfig c = parse_config_text(R"({"metadata": {"sample": "A"}})");
    const auto r = run_command("calibrate", c);
    const auto& t = r.table;
    REQUIRE(t.meta("command") != nullptr);
    CHECK(*t.meta("command") == "calibrate");
    CHECK(*t.meta("config_hash") == fnv1a_hex("{\"metadata\": {\"sample\": \"A\"}}"));
    CHECK(*t.meta("param.frame.nu_ref") == "auto");
    CHECK(*t.meta("note.sample") == "A");
    CHECK(t.meta("version") != nullptr);
    CHECK(t.meta("param.plasmon.gamma_n") != nullptr);
}

TEST_CASE("usage errors") {
    const RunConfig c = parse_config_text("{}");
    CHECK_THROWS_AS(run_command("steady-sweep", c), UsageError);
    CHECK_THROWS_AS(run_command("bogus", c), UsageError);
}

TEST_CASE("run_app exit codes and reproducible output") {
    const auto cfg = scratch("cfg.json");
    std::ofstream(cfg) << R"({"sweep": [{"path": "drive.omega_a_rabi", "values": [0, 16e12]}]})";
    const auto out1 = scratch("a.csv");
    const auto out2 = scratch("b.csv");
    const auto outj = scratch("c.json");

    CHECK(run({"threshold", "--config", cfg.string(), "--out", out1.string(), "--workers", "1"}) == 0);
    CHECK(run({"threshold", "--config", cfg.string(), "--out", out2.string(), "--workers", "4"}) == 0);
    const std::string a = slurp(out1), b = slurp(out2);
    CHECK(a.find("# timestamp: ") != std::string::npos);
    CHECK(drop_timestamp(a) == drop_timestamp(b));

    CHECK(run({"threshold", "--config", cfg.string(), "--out", outj.string(), "--format", "json"}) == 0);
    const SweepTable from_json = parse_json(slurp(outj));
    const SweepTable from_csv = parse_csv(a);
    CHECK(from_json.rows == from_csv.rows);

    CHECK(run({"threshold", "--config", "/nonexistent.json"}) == 1);
    CHECK(run({"threshold"}) == 1);
    CHECK(run({"frobnicate", "--config", cfg.string()}) == 1);
    std::ofstream(scratch("empty.json")) << "{}";
    CHECK(run({"steady-sweep", "--config", scratch("empty.json").string()}) == 1);
    std::ofstream(scratch("bad.json")) << "{\"gain\": {\"gamma21\": -1}}";
    CHECK(run({"threshold", "--config", scratch("bad.json").string()}) == 1);
}
