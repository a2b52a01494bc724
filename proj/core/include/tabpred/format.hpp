#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <system_error>

namespace tabpred {

// Shortest decimal form that round-trips to the same double. Integral
// values print without an exponent or trailing ".0" (to_chars general form).
inline std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline std::string format_fixed(double value, int digits) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

} // namespace tabpred
