#pragma once

#include <stdexcept>
#include <string>

namespace ucn {

// Bad inputs: configs, preconditions, geometry. CLI exit code 2.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN/overflow or norm loss during a run. CLI exit code 3.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ucn
