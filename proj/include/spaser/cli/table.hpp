#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spaser/cli/config.hpp"
#include "spaser/core/error.hpp"

namespace spaser::cli {

class IoError : public Error {
public:
    using Error::Error;
};

struct Column {
    std::string name;
    std::string unit;  ///< "rad/s", "s", "1" for dimensionless, "flag" for 0/1
};

/// Rectangular table of doubles with string metadata. Unconverged or absent
/// values are NaN.
struct SweepTable {
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    /// Throws std::invalid_argument on a duplicate name.
    void add_column(const std::string& name, const std::string& unit);
    /// Throws std::invalid_argument unless the row width matches the columns.
    void add_row(std::vector<double> row);
    /// Index of `name`, or npos.
    std::size_t column_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
    const std::string* meta(const std::string& key) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Bitwise equality of cells (NaN equals NaN), columns and metadata.
bool identical(const SweepTable& a, const SweepTable& b);

std::string to_csv(const SweepTable& table);
std::string to_json(const SweepTable& table);
SweepTable parse_csv(const std::string& text);
SweepTable parse_json(const std::string& text);

void emit(const SweepTable& table, OutputFormat format, std::ostream& out);
/// Writes to `path`, or stdout when `path` is empty. Throws IoError.
void emit(const SweepTable& table, OutputFormat format, const std::string& path);

}  // namespace spaser::cli
