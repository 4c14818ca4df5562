#pragma once

#include <filesystem>

#include "fuel/matrix.hpp"

namespace fuel {

// <stem>.bin holds raw little-endian f64 values in row-major order; <stem>.meta.json
// records {rows, cols, dtype: "f64", layout: "row-major", endianness: "little"}.
// With csv = true a <stem>.csv text copy is written as well.
void write_embedding(const std::filesystem::path& stem, const Matrix& m, bool csv = false);

// Accepts the stem, the .bin path, or the .meta.json path.
Matrix read_embedding(const std::filesystem::path& path);

}  // namespace fuel
