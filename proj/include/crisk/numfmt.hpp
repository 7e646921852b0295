#pragma once

#include <charconv>
#include <string>

namespace crisk {

/// Shortest decimal text that re-parses to exactly the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace crisk
