#include "bcode/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <vector>

namespace bcode {

Matrix read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::size_t row_cols = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (true) {
            const char* comma = p;
            while (comma < end && *comma != ',') ++comma;
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(p, comma, v);
            if (ec != std::errc() || ptr != comma)
                throw IoError("malformed CSV at line " + std::to_string(lineno) +
                              ": cannot parse '" + std::string(p, comma) + "'");
            values.push_back(v);
            ++row_cols;
            if (comma == end) break;
            p = comma + 1;
        }
        if (cols == 0)
            cols = row_cols;
        else if (row_cols != cols)
            throw IoError("malformed CSV at line " + std::to_string(lineno) + ": expected " +
                          std::to_string(cols) + " fields, got " + std::to_string(row_cols));
        ++rows;
    }
    if (rows == 0) throw IoError("malformed CSV at line 1: file is empty");
    try {
        return Matrix(rows, cols, std::move(values));
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("malformed CSV: ") + e.what());
    }
}

void write_csv(const std::string& path, const Matrix& m) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    char buf[64];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out << buf;
            if (j + 1 < m.cols()) out << ',';
        }
        out << '\n';
    }
    if (!out) throw IoError("short write to '" + path + "'");
}

}  // namespace bcode
