#pragma once

#include <stdexcept>
#include <string>

namespace emotrend {

// Error categories surfaced by the CLI as distinct diagnostics.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Valid configuration, but the data cannot support the requested computation
// (empty corpus, too few points, undefined metric).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace emotrend
