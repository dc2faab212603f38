#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "ucnwave/errors.hpp"

namespace ucn {

/// Comma-separated output: '.' decimal point, header row, %.12g values.
/// Formatting is locale-independent so identical inputs give identical bytes.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(std::initializer_list<double> values);
    void row(const std::vector<std::string>& cells);

    static std::string format(double v);

private:
    std::ofstream out_;
};

}  // namespace ucn
