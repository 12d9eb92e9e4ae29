#include "plis/data_io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "plis/config.hpp"
#include "plis/error.hpp"

namespace plis {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool pending = false;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(current);
            current.clear();
            pending = true;
        } else if (ch == ' ' || ch == '\t' || ch == '\r') {
            if (!current.empty()) {
                fields.push_back(current);
                current.clear();
                pending = false;
            }
        } else {
            current.push_back(ch);
            pending = true;
        }
    }
    if (pending || !current.empty()) {
        fields.push_back(current);
    }
    return fields;
}

std::optional<double> to_number(const std::string& text) {
    if (text.empty()) {
        return std::nullopt;
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || errno == ERANGE) {
        return std::nullopt;
    }
    return v;
}

std::string located(const std::string& source, std::size_t line, const std::string& message) {
    return source + ":" + std::to_string(line) + ": " + message;
}

} // namespace

const std::vector<double>& DataTable::column(const std::string& key) const {
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (names[k] == key) {
            return columns[k];
        }
    }
    if (const auto pos = to_number(key); pos && *pos >= 1 && *pos <= static_cast<double>(columns.size()) &&
                                         *pos == static_cast<double>(static_cast<std::size_t>(*pos))) {
        return columns[static_cast<std::size_t>(*pos) - 1];
    }
    throw Error(ErrorKind::config_error, "no column '" + key + "'");
}

DataTable read_table(std::istream& in, const std::string& source) {
    DataTable table;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = trim(line);
        if (trimmed.empty() || trimmed[0] == '#') {
            continue;
        }
        const auto fields = split_fields(trimmed);
        std::vector<double> values;
        std::size_t bad = fields.size();
        for (std::size_t k = 0; k < fields.size(); ++k) {
            const auto v = to_number(fields[k]);
            if (!v) {
                bad = std::min(bad, k);
                continue;
            }
            values.push_back(*v);
        }
        if (first) {
            first = false;
            table.columns.resize(fields.size());
            if (bad < fields.size()) {
                table.names = fields;
                continue;
            }
        }
        if (fields.size() != table.columns.size()) {
            throw Error(ErrorKind::parse_error, located(source, line_no, "expected " +
                                                                             std::to_string(table.columns.size()) +
                                                                             " fields, found " +
                                                                             std::to_string(fields.size())));
        }
        if (bad < fields.size()) {
            throw Error(ErrorKind::parse_error, located(source, line_no, "cannot parse '" + fields[bad] + "'"));
        }
        for (std::size_t k = 0; k < values.size(); ++k) {
            table.columns[k].push_back(values[k]);
        }
        table.lines.push_back(line_no);
    }
    if (table.lines.empty()) {
        throw Error(ErrorKind::parse_error, source + ": no data rows");
    }
    return table;
}

DataTable read_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io_error, "cannot open '" + path + "'");
    }
    return read_table(in, path);
}

void write_test_output(std::ostream& out, const std::vector<double>& x, const ProcedureResult& result) {
    out << "index,x,s_x,s_y,q_value,e_value,rejected\n";
    for (std::size_t i = 0; i < result.decisions.size(); ++i) {
        out << i + 1 << ',' << (i < x.size() ? format_double(x[i]) : "NA") << ','
            << format_double(result.scores.sx(i)) << ',' << format_double(result.scores.sy(i)) << ','
            << format_double(result.q_values[i]) << ',' << format_double(result.e_values[i]) << ','
            << (result.decisions[i] ? 1 : 0) << '\n';
    }
}

std::vector<TestOutputRow> read_test_output(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || trim(line) != "index,x,s_x,s_y,q_value,e_value,rejected") {
        throw Error(ErrorKind::parse_error, "result file: unexpected header");
    }
    std::vector<TestOutputRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(trim(line));
        if (fields.size() != 7) {
            throw Error(ErrorKind::parse_error, located("result file", line_no, "expected 7 fields"));
        }
        auto number = [&](std::size_t k) {
            const auto v = to_number(fields[k]);
            if (!v) {
                throw Error(ErrorKind::parse_error, located("result file", line_no, "cannot parse '" + fields[k] + "'"));
            }
            return *v;
        };
        TestOutputRow row;
        row.index = static_cast<std::size_t>(number(0));
        if (fields[1] != "NA") {
            row.x = number(1);
        }
        row.s_x = number(2);
        row.s_y = number(3);
        row.q_value = number(4);
        row.e_value = number(5);
        row.rejected = number(6) != 0.0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace plis
