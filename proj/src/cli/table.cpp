#include "spaser/cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace spaser::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string format_cell(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_cell(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw IoError("csv: cannot parse cell '" + s + "'");
    return v;
}

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool same_bits(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

void SweepTable::add_column(const std::string& name, const std::string& unit) {
    if (column_index(name) != npos) throw std::invalid_argument("duplicate column '" + name + "'");
    if (!rows.empty()) throw std::invalid_argument("add_column after rows were added");
    columns.push_back({name, unit});
}

void SweepTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw std::invalid_argument("row width does not match columns");
    rows.push_back(std::move(row));
}

std::size_t SweepTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return i;
    return npos;
}

std::vector<double> SweepTable::column(const std::string& name) const {
    const std::size_t k = column_index(name);
    if (k == npos) throw std::invalid_argument("no column '" + name + "'");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
}

const std::string* SweepTable::meta(const std::string& key) const {
    for (const auto& [k, v] : metadata)
        if (k == key) return &v;
    return nullptr;
}

bool identical(const SweepTable& a, const SweepTable& b) {
    if (a.metadata != b.metadata || a.columns.size() != b.columns.size() ||
        a.rows.size() != b.rows.size())
        return false;
    for (std::size_t i = 0; i < a.columns.size(); ++i)
        if (a.columns[i].name != b.columns[i].name || a.columns[i].unit != b.columns[i].unit)
            return false;
    for (std::size_t r = 0; r < a.rows.size(); ++r)
        for (std::size_t c = 0; c < a.columns.size(); ++c)
            if (!same_bits(a.rows[r][c], b.rows[r][c])) return false;
    return true;
}

std::string to_csv(const SweepTable& t) {
    std::string out;
    for (const auto& [k, v] : t.metadata) out += "# " + one_line(k) + ": " + one_line(v) + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i].name + " (" + t.columns[i].unit + ")";
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

SweepTable parse_csv(const std::string& text) {
    SweepTable t;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!header && line.rfind("# ", 0) == 0) {
            const auto sep = line.find(": ", 2);
            if (sep == std::string::npos) throw IoError("csv: malformed metadata line '" + line + "'");
            t.metadata.emplace_back(line.substr(2, sep - 2), line.substr(sep + 2));
            continue;
        }
        if (!header) {
            header = true;
            for (const auto& cell : split(line, ',')) {
                const auto open = cell.rfind(" (");
                if (open == std::string::npos || cell.back() != ')')
                    throw IoError("csv: header cell '" + cell + "' lacks a unit");
                t.add_column(cell.substr(0, open), cell.substr(open + 2, cell.size() - open - 3));
            }
            continue;
        }
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& cell : split(line, ',')) row.push_back(parse_cell(cell));
        if (row.size() != t.columns.size()) throw IoError("csv: ragged row");
        t.rows.push_back(std::move(row));
    }
    if (!header) throw IoError("csv: missing header row");
    return t;
}

std::string to_json(const SweepTable& t) {
    ojson doc;
    doc["metadata"] = ojson::object();
    for (const auto& [k, v] : t.metadata) doc["metadata"][k] = v;
    doc["columns"] = ojson::array();
    for (const auto& c : t.columns) doc["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
    doc["rows"] = ojson::array();
    for (const auto& row : t.rows) {
        ojson r = ojson::array();
        for (double v : row) {
            if (std::isfinite(v)) r.push_back(v);
            else r.push_back(nullptr);
        }
        doc["rows"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

SweepTable parse_json(const std::string& text) {
    SweepTable t;
    try {
        const ojson doc = ojson::parse(text);
        for (const auto& [k, v] : doc.at("metadata").items()) t.metadata.emplace_back(k, v.get<std::string>());
        for (const auto& c : doc.at("columns"))
            t.add_column(c.at("name").get<std::string>(), c.at("unit").get<std::string>());
        for (const auto& r : doc.at("rows")) {
            std::vector<double> row;
            for (const auto& v : r)
                row.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
            t.add_row(std::move(row));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("json table: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("json table: ") + e.what());
    }
    return t;
}

void emit(const SweepTable& table, OutputFormat format, std::ostream& out) {
    out << (format == OutputFormat::Json ? to_json(table) : to_csv(table));
    out.flush();
    if (!out) throw IoError("emit: write failed");
}

void emit(const SweepTable& table, OutputFormat format, const std::string& path) {
    if (path.empty()) {
        emit(table, format, std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("emit: cannot open '" + path + "' for writing");
    try {
        emit(table, format, out);
    } catch (const IoError&) {
        throw IoError("emit: write to '" + path + "' failed");
    }
}

}  // namespace spaser::cli
