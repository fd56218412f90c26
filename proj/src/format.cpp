#include "vpoly/format.hpp"

#include <cmath>
#include <cstdio>

namespace vpoly {

std::string fmt_double(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace vpoly
