#include "morandim/format.hpp"

#include <cmath>
#include <cstdio>

namespace morandim {

std::string format_number(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  if (std::abs(x) < 1e-4) {
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  } else {
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  }
  return buf;
}

}  // namespace morandim
