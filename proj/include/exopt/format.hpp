#pragma once

// Locale-independent number rendering. CSV output must be byte-identical
// across runs and machines, so everything routes through std::to_chars.

#include <charconv>
#include <string>
#include <system_error>

namespace exopt {

// Fixed-point with `dp` decimals (tableau cells use 2, probability
// columns 4).
inline std::string format_fixed(double v, int dp) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, dp);
    return std::string(buf, res.ptr);
}

// Machine-facing full precision: 17 significant digits.
inline std::string format_full(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace exopt
