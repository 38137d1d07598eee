#pragma once

// Deterministic text formatting shared by CSV writers.

#include <string>

namespace dfsphoton {

/// Shortest round-trip decimal form with '.' as separator ("%.17g").
std::string format_number(double value);

}  // namespace dfsphoton
