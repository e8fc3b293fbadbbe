#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

#include "shapnn/errors.hpp"

namespace shapnn {

// shortest text form that round-trips an IEEE double (17 significant digits)
inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// bit-exact double <-> text via C99 hex floats
inline std::string to_hexfloat(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

inline double from_hexfloat(const std::string& text) {
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw ValidationError("malformed float literal '" + text + "'");
    return value;
}

inline double parse_double(const std::string& text) {
    return from_hexfloat(text); // strtod accepts both decimal and hex forms
}

} // namespace shapnn
