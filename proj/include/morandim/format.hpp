#pragma once

#include <string>

namespace morandim {

// CSV/JSON number text: '.' decimal point, scientific notation when
// 0 < |x| < 1e-4, `digits` significant digits otherwise.
std::string format_number(double x, int digits = 12);

}  // namespace morandim
