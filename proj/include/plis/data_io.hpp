#ifndef PLIS_DATA_IO_HPP
#define PLIS_DATA_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plis/procedures.hpp"

/**
 * @file data_io.hpp
 *
 * @brief Delimited text input and the per-hypothesis result file of the command line.
 *
 * Fields are separated by commas, tabs or spaces. Blank lines and lines starting with `#` are
 * skipped. A first row with any non-numeric field is a header.
 */

namespace plis {

struct DataTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    /// Source line of each row, for diagnostics.
    std::vector<std::size_t> lines;

    std::size_t rows() const { return lines.size(); }
    /// Column by header name or by 1-based position. Throws `config_error` when absent.
    const std::vector<double>& column(const std::string& key) const;
};

/// Throws `parse_error` with `source:line:` on ragged rows or bad numbers and on empty input.
DataTable read_table(std::istream& in, const std::string& source);
DataTable read_table_file(const std::string& path);

struct TestOutputRow {
    std::size_t index = 0;
    std::optional<double> x;
    double s_x = 0.0;
    double s_y = 0.0;
    double q_value = 0.0;
    double e_value = 0.0;
    bool rejected = false;
};

/// Columns index, x, s_x, s_y, q_value, e_value, rejected. Indices are 1-based; x may be NA.
void write_test_output(std::ostream& out, const std::vector<double>& x, const ProcedureResult& result);
std::vector<TestOutputRow> read_test_output(std::istream& in);

} // namespace plis

#endif // PLIS_DATA_IO_HPP
