#pragma once

#include <cstdio>
#include <string>

namespace fedboost {

// Canonical number formatting for text artifacts: 17 significant digits
// round-trips any finite double exactly, and equal doubles always render
// to equal bytes.
inline std::string format_g17(double v) {
    char buf[40];
    int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace fedboost
