#pragma once

#include "arise/types.hpp"

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace arise {

// Rectangular numeric table; an optional leading timestamp column (header
// "t", "time" or "timestamp") is carried along but excluded from values.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::string> timestamps; // empty unless a timestamp column was present
    TimeSeriesMatrix values;

    bool has_timestamps() const { return !timestamps.empty(); }
};

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

CsvTable read_csv(std::istream& in, const std::string& name = "<stream>");
CsvTable read_csv_file(const std::string& path);

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

CsvTable make_table(const TimeSeriesMatrix& values, std::vector<std::string> header = {});

// Shortest decimal text that round-trips a double (17 significant digits).
std::string format_double(double v);

} // namespace arise
