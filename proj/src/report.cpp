#include "dfsphoton/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace dfsphoton {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0 as well
  // Try shorter forms first so typical values stay readable and still round-trip.
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

}  // namespace dfsphoton
