#pragma once

#include <charconv>
#include <string>

namespace cevdetect {

/// Shortest decimal text that parses back to exactly `x` (at most 17
/// significant digits), '.' as decimal point, independent of locale.
inline std::string format_real(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace cevdetect
