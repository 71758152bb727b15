#include "spaser/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "spaser/core/units.hpp"

namespace spaser::cli {

namespace {

using nlohmann::json;

enum class Dim { Rate, Count };

struct ParamSlot {
    const char* path;
    Dim dim;
    std::function<double&(ModelParams&)> ref;
};

const std::vector<ParamSlot>& slots() {
    static const std::vector<ParamSlot> table = {
        {"gain.gamma21", Dim::Rate, [](ModelParams& p) -> double& { return p.gain.gamma21; }},
        {"gain.gamma31", Dim::Rate, [](ModelParams& p) -> double& { return p.gain.gamma31; }},
        {"gain.gamma32", Dim::Rate, [](ModelParams& p) -> double& { return p.gain.gamma32; }},
        {"gain.gamma_ph", Dim::Rate, [](ModelParams& p) -> double& { return p.gain.gamma_ph; }},
        {"gain.pump_g", Dim::Rate, [](ModelParams& p) -> double& { return p.gain.pump_g; }},
        {"gain.omega21", Dim::Rate, [](ModelParams& p) -> double& { return p.gain.omega21; }},
        {"gain.omega32", Dim::Rate, [](ModelParams& p) -> double& { return p.gain.omega32; }},
        {"plasmon.omega_n", Dim::Rate, [](ModelParams& p) -> double& { return p.plasmon.omega_n; }},
        {"plasmon.gamma_n", Dim::Rate, [](ModelParams& p) -> double& { return p.plasmon.gamma_n; }},
        {"plasmon.n_p", Dim::Count, [](ModelParams& p) -> double& { return p.plasmon.n_p; }},
        {"plasmon.omega_b_single", Dim::Rate,
         [](ModelParams& p) -> double& { return p.plasmon.omega_b_single; }},
        {"drive.omega_a_rabi", Dim::Rate,
         [](ModelParams& p) -> double& { return p.drive.omega_a_rabi; }},
        {"drive.delta_a", Dim::Rate, [](ModelParams& p) -> double& { return p.drive.delta_a; }},
        {"frame.nu_ref", Dim::Rate, [](ModelParams& p) -> double& { return p.frame.nu_ref; }},
    };
    return table;
}

const ParamSlot* find_slot(const std::string& path) {
    for (const auto& s : slots())
        if (path == s.path) return &s;
    return nullptr;
}

class Parser {
public:
    explicit Parser(std::string origin) : origin_(std::move(origin)) {}

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError(ConfigError::Kind::Schema,
                          origin_ + ": schema error at '" + key + "': " + what);
    }

    void only_keys(const json& obj, const std::string& where,
                   std::initializer_list<const char*> allowed) const {
        if (!obj.is_object()) fail(where, "expected an object");
        for (const auto& [key, _] : obj.items()) {
            const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                        [&](const char* a) { return key == a; });
            if (!ok) fail(join(where, key), "unknown key");
        }
    }

    static std::string join(const std::string& where, const std::string& key) {
        return where.empty() ? key : where + "." + key;
    }

    double number(const json& v, const std::string& key) const {
        if (!v.is_number()) fail(key, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(key, "must be finite");
        return x;
    }

    // Converts `value` given in `unit` to rad/s (rates) or leaves counts unchanged.
    double convert(double value, const std::string& unit, Dim dim, const std::string& key) const {
        if (dim == Dim::Count) {
            if (unit.empty() || unit == "1") return value;
            fail(key, "dimensionless quantity cannot carry unit '" + unit + "'");
        }
        if (unit.empty() || unit == "rad/s" || unit == "s^-1" || unit == "1/s") return value;
        if (unit == "eV") return units::ev_to_angular(value);
        if (unit == "meV") return units::ev_to_angular(1e-3 * value);
        fail(key, "unknown unit '" + unit + "' (expected rad/s, s^-1, eV or meV)");
    }

    std::string unit_of(const json& obj, const std::string& key) const {
        if (!obj.contains("unit")) return {};
        if (!obj["unit"].is_string()) fail(join(key, "unit"), "expected a string");
        return obj["unit"].get<std::string>();
    }

    // Plain number in rad/s, or {"value": x, "unit": "...", "provenance": "..."}.
    double quantity(const json& v, Dim dim, const std::string& key) const {
        if (v.is_number()) return convert(number(v, key), "", dim, key);
        if (!v.is_object()) fail(key, "expected a number or {\"value\", \"unit\"}");
        only_keys(v, key, {"value", "unit", "provenance"});
        if (!v.contains("value")) fail(join(key, "value"), "missing");
        if (v.contains("provenance") && !v["provenance"].is_string())
            fail(join(key, "provenance"), "expected a string");
        return convert(number(v["value"], join(key, "value")), unit_of(v, key), dim, key);
    }

    // Durations in seconds, optionally {"value", "unit": s|ps|fs}.
    double duration(const json& v, const std::string& key) const {
        double x = 0.0;
        std::string unit;
        if (v.is_object()) {
            only_keys(v, key, {"value", "unit"});
            if (!v.contains("value")) fail(join(key, "value"), "missing");
            x = number(v["value"], join(key, "value"));
            unit = unit_of(v, key);
        } else {
            x = number(v, key);
        }
        if (unit == "ps") x *= 1e-12;
        else if (unit == "fs") x *= 1e-15;
        else if (!unit.empty() && unit != "s") fail(key, "unknown time unit '" + unit + "'");
        return x;
    }

    void model_section(const json& doc, const char* section, RunConfig& cfg) const {
        if (!doc.contains(section)) return;
        const json& obj = doc[section];
        if (!obj.is_object()) fail(section, "expected an object");
        for (const auto& [key, v] : obj.items()) {
            const std::string path = join(section, key);
            if (path == "frame.nu_ref" && v.is_string()) {
                if (v.get<std::string>() != "auto") fail(path, "expected a frequency or \"auto\"");
                cfg.frame_auto = true;
                continue;
            }
            const ParamSlot* slot = find_slot(path);
            if (!slot) fail(path, "unknown key");
            slot->ref(cfg.model) = quantity(v, slot->dim, path);
            if (path == "frame.nu_ref") cfg.frame_auto = false;
        }
    }

    SweepAxis axis(const json& v, const std::string& key) const {
        only_keys(v, key, {"path", "min", "max", "count", "scale", "values", "unit"});
        SweepAxis ax;
        if (!v.contains("path") || !v["path"].is_string()) fail(join(key, "path"), "expected a string");
        ax.path = v["path"].get<std::string>();
        const ParamSlot* slot = find_slot(ax.path);
        if (!slot) fail(join(key, "path"), "unknown parameter path '" + ax.path + "'");
        const std::string unit = unit_of(v, key);

        if (v.contains("values")) {
            for (const char* k : {"min", "max", "count", "scale"})
                if (v.contains(k)) fail(join(key, k), "not allowed together with 'values'");
            const json& vals = v["values"];
            if (!vals.is_array() || vals.empty()) fail(join(key, "values"), "expected a non-empty array");
            for (std::size_t i = 0; i < vals.size(); ++i) {
                const std::string k = join(key, "values[" + std::to_string(i) + "]");
                ax.values.push_back(convert(number(vals[i], k), unit, slot->dim, k));
            }
            ax.min = *std::min_element(ax.values.begin(), ax.values.end());
            ax.max = *std::max_element(ax.values.begin(), ax.values.end());
            ax.count = ax.values.size();
            return ax;
        }

        for (const char* k : {"min", "max", "count"})
            if (!v.contains(k)) fail(join(key, k), "missing");
        ax.min = convert(number(v["min"], join(key, "min")), unit, slot->dim, join(key, "min"));
        ax.max = convert(number(v["max"], join(key, "max")), unit, slot->dim, join(key, "max"));
        if (!v["count"].is_number_integer() || v["count"].get<long long>() < 1)
            fail(join(key, "count"), "expected an integer >= 1");
        ax.count = v["count"].get<std::size_t>();
        if (ax.min > ax.max) fail(key, "min must not exceed max");
        if (v.contains("scale")) {
            const json& s = v["scale"];
            if (s == "linear") ax.scale = AxisScale::Linear;
            else if (s == "log") ax.scale = AxisScale::Log;
            else fail(join(key, "scale"), "expected \"linear\" or \"log\"");
        }
        if (ax.scale == AxisScale::Log && !(ax.min > 0.0)) fail(join(key, "min"), "log axis needs min > 0");
        return ax;
    }

    void options_section(const json& doc, RunOptions& o) const {
        if (!doc.contains("options")) return;
        const json& obj = doc["options"];
        only_keys(obj, "options",
                  {"tol", "seed_amplitude", "t_end", "sample_interval", "g_bracket", "cross_check",
                   "workers", "format", "output"});
        auto positive = [&](const char* k, double x) {
            if (!(x > 0.0)) fail(join("options", k), "must be > 0");
            return x;
        };
        if (obj.contains("tol")) o.tol = positive("tol", number(obj["tol"], "options.tol"));
        if (obj.contains("seed_amplitude"))
            o.seed_amplitude = positive("seed_amplitude",
                                        number(obj["seed_amplitude"], "options.seed_amplitude"));
        if (obj.contains("t_end")) o.t_end = positive("t_end", duration(obj["t_end"], "options.t_end"));
        if (obj.contains("sample_interval")) {
            o.sample_interval = duration(obj["sample_interval"], "options.sample_interval");
            if (o.sample_interval < 0.0) fail("options.sample_interval", "must be >= 0");
        }
        if (obj.contains("g_bracket")) {
            const json& b = obj["g_bracket"];
            if (!b.is_array() || b.size() != 2) fail("options.g_bracket", "expected [lo, hi]");
            o.g_lo = quantity(b[0], Dim::Rate, "options.g_bracket[0]");
            o.g_hi = quantity(b[1], Dim::Rate, "options.g_bracket[1]");
            if (!(o.g_lo >= 0.0 && o.g_hi > o.g_lo)) fail("options.g_bracket", "need 0 <= lo < hi");
        }
        if (obj.contains("cross_check")) {
            if (!obj["cross_check"].is_boolean()) fail("options.cross_check", "expected true or false");
            o.cross_check = obj["cross_check"].get<bool>();
        }
        if (obj.contains("workers")) {
            if (!obj["workers"].is_number_unsigned()) fail("options.workers", "expected an integer >= 0");
            o.workers = obj["workers"].get<unsigned>();
        }
        if (obj.contains("format")) {
            const json& f = obj["format"];
            if (f == "csv") o.format = OutputFormat::Csv;
            else if (f == "json") o.format = OutputFormat::Json;
            else fail("options.format", "expected \"csv\" or \"json\"");
        }
        if (obj.contains("output")) {
            if (!obj["output"].is_string()) fail("options.output", "expected a string");
            o.output = obj["output"].get<std::string>();
        }
    }

    void notes_section(const json& doc, RunConfig& cfg) const {
        if (!doc.contains("metadata")) return;
        const json& obj = doc["metadata"];
        if (!obj.is_object()) fail("metadata", "expected an object");
        for (const auto& [key, v] : obj.items()) {
            if (v.is_structured()) fail(join("metadata", key), "expected a scalar");
            cfg.notes.emplace_back(key, v.is_string() ? v.get<std::string>() : v.dump());
        }
    }

    RunConfig parse(const std::string& text) const {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(ConfigError::Kind::Syntax, origin_ + ": syntax error: " + e.what());
        }
        only_keys(doc, "", {"gain", "plasmon", "drive", "frame", "sweep", "options", "metadata"});

        RunConfig cfg;
        cfg.model = default_model_params();
        cfg.source_hash = fnv1a_hex(text);
        for (const char* section : {"gain", "plasmon", "drive", "frame"}) model_section(doc, section, cfg);

        if (doc.contains("sweep")) {
            const json& sw = doc["sweep"];
            if (!sw.is_array()) fail("sweep", "expected an array of axes");
            if (sw.size() > 3) fail("sweep", "at most 3 axes are supported");
            std::set<std::string> seen;
            for (std::size_t i = 0; i < sw.size(); ++i) {
                SweepAxis ax = axis(sw[i], "sweep[" + std::to_string(i) + "]");
                if (!seen.insert(ax.path).second)
                    fail("sweep[" + std::to_string(i) + "].path", "duplicate axis '" + ax.path + "'");
                cfg.sweep.push_back(std::move(ax));
            }
        }
        options_section(doc, cfg.options);
        notes_section(doc, cfg);
        check(cfg);
        return cfg;
    }

    // Every grid value of every axis must give a valid parameter set.
    void check(const RunConfig& cfg) const {
        try {
            validate(cfg.model);
            for (const auto& ax : cfg.sweep) {
                for (double x : ax.grid()) {
                    ModelParams p = cfg.model;
                    parameter(p, ax.path) = x;
                    validate(p);
                }
            }
        } catch (const InvalidParams& e) {
            throw ConfigError(ConfigError::Kind::Schema, origin_ + ": schema error: " + e.what());
        }
    }

private:
    std::string origin_;
};

SweepAxis values_axis(const char* path, std::vector<double> values) {
    SweepAxis ax;
    ax.path = path;
    ax.min = *std::min_element(values.begin(), values.end());
    ax.max = *std::max_element(values.begin(), values.end());
    ax.count = values.size();
    ax.values = std::move(values);
    return ax;
}

SweepAxis range_axis(const char* path, double lo, double hi, std::size_t count) {
    SweepAxis ax;
    ax.path = path;
    ax.min = lo;
    ax.max = hi;
    ax.count = count;
    return ax;
}

}  // namespace

std::vector<double> SweepAxis::grid() const {
    if (!values.empty()) return values;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        out[i] = scale == AxisScale::Log ? min * std::pow(max / min, t) : min + t * (max - min);
    }
    if (count > 1) out.back() = max;
    return out;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(ConfigError::Kind::MissingFile, path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    return Parser(origin).parse(text);
}

const std::vector<std::string>& parameter_paths() {
    static const std::vector<std::string> paths = [] {
        std::vector<std::string> out;
        for (const auto& s : slots()) out.emplace_back(s.path);
        return out;
    }();
    return paths;
}

double& parameter(ModelParams& params, const std::string& path) {
    const ParamSlot* slot = find_slot(path);
    if (!slot) throw ConfigError(ConfigError::Kind::Schema, "unknown parameter path '" + path + "'");
    return slot->ref(params);
}

double parameter(const ModelParams& params, const std::string& path) {
    return parameter(const_cast<ModelParams&>(params), path);
}

void apply_preset(RunConfig& cfg, const std::string& name) {
    constexpr double e12 = 1e12;
    // Pump axis of the N_n(g) figures: [0, 2e13] s^-1 is an assumption.
    const SweepAxis pump_axis = range_axis("gain.pump_g", 0.0, 2e13, 41);
    if (name == "fig2") {
        cfg.model.gain.gamma_ph = 0.0;
        cfg.sweep = {values_axis("drive.omega_a_rabi", {0.0, 4 * e12, 16 * e12}), pump_axis};
    } else if (name == "fig3") {
        cfg.model.drive.omega_a_rabi = 16 * e12;
        cfg.sweep = {values_axis("gain.gamma_ph", {0.0, 80 * e12, 160 * e12, 240 * e12}), pump_axis};
    } else if (name == "fig4a") {
        cfg.model.gain.gamma_ph = 0.0;
        // Log drive axis wide enough to show the maximum of gamma_s (an assumption).
        SweepAxis drive = range_axis("drive.omega_a_rabi", 1e11, 1e16, 41);
        drive.scale = AxisScale::Log;
        cfg.sweep = {values_axis("gain.pump_g", {4.4 * e12, 6 * e12, 8 * e12}), drive};
    } else if (name == "fig4b") {
        cfg.model.gain.gamma_ph = 0.0;
        cfg.model.gain.pump_g = 8 * e12;
        cfg.sweep = {values_axis("drive.omega_a_rabi", {0.0, 24 * e12})};
    } else {
        throw ConfigError(ConfigError::Kind::Schema,
                          "unknown preset '" + name + "' (expected fig2, fig3, fig4a or fig4b)");
    }
    cfg.preset = name;
    cfg.source_hash = fnv1a_hex(cfg.source_hash + "+preset:" + name);
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace spaser::cli
