#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <system_error>

namespace cmab {

/// Shortest decimal that round-trips to the same double. Locale independent,
/// so CSV output is byte-stable.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

inline std::string format_bool(bool b) { return b ? "true" : "false"; }

}  // namespace cmab
