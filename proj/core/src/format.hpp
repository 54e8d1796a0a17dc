#pragma once

#include <cstdio>
#include <string>

namespace efx::detail {

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace efx::detail
