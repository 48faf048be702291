#pragma once

// Shared conventions for machine-readable output: schema version, 12
// significant digits, locale-independent number text.

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "json.hpp"

namespace polyrad::report {

inline constexpr int schema_version = 1;
inline constexpr int significant_digits = 12;

/// Shortest text of x at 12 significant digits; "nan", "inf", "-inf" otherwise.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, significant_digits);
    return {buf, res.ptr};
}

/// x rounded to 12 significant digits, so that JSON dumps are stable at that precision.
inline double round_sig(double x) {
    if (!std::isfinite(x)) return x;
    const std::string s = format_number(x);
    double out = x;
    std::from_chars(s.data(), s.data() + s.size(), out);
    return out;
}

/// JSON value for a double; non-finite values become strings.
inline nlohmann::json number(double x) {
    if (!std::isfinite(x)) return format_number(x);
    return round_sig(x);
}

inline nlohmann::json document() { return {{"schema_version", schema_version}}; }

}  // namespace polyrad::report
