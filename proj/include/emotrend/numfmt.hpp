#pragma once

#include <charconv>
#include <string>

namespace emotrend {

// Shortest round-trip decimal form. Keeps CSV/report output byte-stable for
// identical inputs without committing to a fixed precision.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace emotrend
