#pragma once

// CSV ingestion and emission. Parse problems throw io_error, which the CLI
// maps to its own exit code, separate from statistical errors.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankcorr/core.hpp"

namespace rankcorr {

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline bool parse_double(const std::string& cell, double& out) {
    const std::string t = trim(cell);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

inline char detect_delimiter(const std::string& line) {
    if (line.find(',') != std::string::npos) return ',';
    if (line.find(';') != std::string::npos) return ';';
    if (line.find('\t') != std::string::npos) return '\t';
    return ',';
}

inline std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

}  // namespace detail

// Two-column numeric CSV with optional header; delimiter auto-detected among
// comma, semicolon and tab. Rows with missing or non-finite entries are
// rejected with the offending line number.
inline PairedSample read_paired_csv(std::istream& in) {
    Series x, y;
    std::string line;
    char delim = ',';
    bool first_content_line = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        if (first_content_line) delim = detail::detect_delimiter(line);
        const std::vector<std::string> cells = detail::split(line, delim);
        if (cells.size() != 2)
            throw io_error("line " + std::to_string(line_no) + ": expected 2 columns, got " +
                           std::to_string(cells.size()));
        double a = 0.0, b = 0.0;
        const bool ok = detail::parse_double(cells[0], a) && detail::parse_double(cells[1], b);
        if (!ok) {
            if (first_content_line) {  // header row
                first_content_line = false;
                continue;
            }
            throw io_error("line " + std::to_string(line_no) + ": non-numeric cell");
        }
        if (!std::isfinite(a) || !std::isfinite(b))
            throw io_error("line " + std::to_string(line_no) + ": non-finite value");
        first_content_line = false;
        x.push_back(a);
        y.push_back(b);
    }
    if (x.empty()) throw io_error("no data rows");
    return PairedSample(std::move(x), std::move(y));
}

// shortest representation that round-trips a double exactly
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = 0.0;
    if (detail::parse_double(buf, back) && back == v) {
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[40];
            std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
            if (detail::parse_double(shorter, back) && back == v) return shorter;
        }
    }
    return buf;
}

inline void write_paired_csv(std::ostream& out, const PairedSample& p) {
    out << "x,y\n";
    for (std::size_t i = 0; i < p.size(); ++i)
        out << format_double(p.x[i]) << ',' << format_double(p.y[i]) << '\n';
}

}  // namespace rankcorr
