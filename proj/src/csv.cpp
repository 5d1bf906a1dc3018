#include "arise/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace arise {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool is_timestamp_name(const std::string& name) {
    std::string n = lower(name);
    return n == "t" || n == "time" || n == "timestamp";
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col, const std::string& name) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (end == begin || (end && *end != '\0') || !std::isfinite(v))
        throw CsvError(name + ": non-numeric cell at row " + std::to_string(row) + ", column " +
                       std::to_string(col + 1) + ": '" + cell + "'");
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvTable read_csv(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) throw CsvError(name + ": empty file");
    CsvTable table;
    table.header = split_line(line);
    const std::size_t ncols = table.header.size();
    if (ncols == 0) throw CsvError(name + ": empty header");

    bool has_ts = is_timestamp_name(table.header.front()) && ncols > 1;
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != ncols)
            throw CsvError(name + ": ragged row " + std::to_string(lineno) + " (" +
                           std::to_string(cells.size()) + " cells, expected " + std::to_string(ncols) + ")");
        std::size_t start = has_ts ? 1 : 0;
        if (has_ts) table.timestamps.push_back(cells.front());
        std::vector<double> row;
        row.reserve(ncols - start);
        for (std::size_t c = start; c < ncols; ++c)
            row.push_back(parse_cell(cells[c], lineno, c, name));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw CsvError(name + ": empty data");

    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncols - (has_ts ? 1 : 0)));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError(path + ": cannot open for reading");
    return read_csv(in, path);
}

void write_csv(std::ostream& out, const CsvTable& table) {
    const bool has_ts = table.has_timestamps();
    const Eigen::Index cols = table.values.cols();
    std::vector<std::string> header = table.header;
    if (header.empty()) {
        if (has_ts) header.push_back("t");
        for (Eigen::Index c = 0; c < cols; ++c) header.push_back("x" + std::to_string(c + 1));
    }
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
        if (has_ts) out << table.timestamps[static_cast<std::size_t>(r)] << ',';
        for (Eigen::Index c = 0; c < cols; ++c)
            out << (c ? "," : "") << format_double(table.values(r, c));
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw CsvError(path + ": cannot open for writing");
    write_csv(out, table);
}

CsvTable make_table(const TimeSeriesMatrix& values, std::vector<std::string> header) {
    CsvTable t;
    t.values = values;
    t.header = std::move(header);
    return t;
}

} // namespace arise
