#pragma once

#include <string>

#include "fuel/matrix.hpp"

namespace fuel {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// One line per row, comma-separated, shortest round-trip decimals.
std::string matrix_to_csv(const Matrix& m);

}  // namespace fuel
