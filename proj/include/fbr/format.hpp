#pragma once

#include <cstdio>
#include <string>

namespace fbr {

/// Shortest text that always round-trips: 17 significant digits.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace fbr
