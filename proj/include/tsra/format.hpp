#pragma once

#include <cstdio>
#include <string>

namespace tsra {

// Shortest stable text form used everywhere a double reaches CSV or labels,
// so artifacts are byte-reproducible.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace tsra
