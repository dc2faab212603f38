#include "ucnwave/csv.hpp"

#include <cstdio>

namespace ucn {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path) {
    if (!out_) throw validation_error("cannot open CSV output: " + path);
    row(header);
}

std::string CsvWriter::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void CsvWriter::row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out_ << ',';
        out_ << format(v);
        first = false;
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out_ << ',';
        out_ << c;
        first = false;
    }
    out_ << '\n';
}

}  // namespace ucn
