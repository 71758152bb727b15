#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "spaser/core/error.hpp"
#include "spaser/core/params.hpp"

namespace spaser::cli {

class ConfigError : public Error {
public:
    enum class Kind { MissingFile, Syntax, Schema };

    ConfigError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

enum class AxisScale { Linear, Log };
enum class OutputFormat { Csv, Json };

struct SweepAxis {
    std::string path;  ///< dotted parameter name, e.g. "gain.pump_g"
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 1;
    AxisScale scale = AxisScale::Linear;
    /// Explicit grid; when non-empty it replaces min/max/count/scale.
    std::vector<double> values;

    std::vector<double> grid() const;
};

struct RunOptions {
    /// Relative tolerance of time integration.
    double tol = 1e-6;
    double seed_amplitude = 1e-3;
    double t_end = 2e-11;
    /// Spacing of trajectory rows; 0 selects t_end / 2000.
    double sample_interval = 0.0;
    /// Initial pump bracket for threshold searches; the upper end is expanded on demand.
    double g_lo = 1e9;
    double g_hi = 2e13;
    /// ODE cross-check of every steady state.
    bool cross_check = false;
    /// 0 selects the available hardware parallelism.
    unsigned workers = 0;
    OutputFormat format = OutputFormat::Csv;
    /// Empty writes to stdout.
    std::string output;
};

struct RunConfig {
    ModelParams model;
    /// Move the rotating frame to the spasing frequency instead of frame.nu_ref.
    bool frame_auto = true;
    std::vector<SweepAxis> sweep;
    RunOptions options;
    /// Free-form "metadata" entries copied into every table.
    std::vector<std::pair<std::string, std::string>> notes;
    /// FNV-1a of the config text, hex.
    std::string source_hash;
    std::string preset;
};

/// Reads and validates a JSON config. Every error names the offending key path.
RunConfig parse_config(const std::string& path);

/// Same as parse_config for in-memory text; `origin` labels error messages.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

/// Names accepted as sweep axes and in the gain/plasmon/drive/frame sections.
const std::vector<std::string>& parameter_paths();

/// Reference to the parameter at a dotted path; throws ConfigError for an unknown path.
double& parameter(ModelParams& params, const std::string& path);
double parameter(const ModelParams& params, const std::string& path);

/// Replaces the sweep and drive/dephasing/pump settings with a figure preset:
/// fig2, fig3, fig4a or fig4b.
void apply_preset(RunConfig& config, const std::string& name);

/// 64-bit FNV-1a, lower-case hex.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace spaser::cli
