#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace hhaudit {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_number(double value) {
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{})
        return "nan";
    return std::string(buffer, end);
}

}  // namespace hhaudit
