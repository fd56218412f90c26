#pragma once

#include <string>

namespace vpoly {

/// 17 significant digits, enough to round-trip any double. Used for CSV output.
std::string fmt_double(double x);

}  // namespace vpoly
