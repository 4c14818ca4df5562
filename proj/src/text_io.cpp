#include "fuel/text_io.hpp"

#include <charconv>

namespace fuel {

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 8);
  char buffer[32];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      const auto result = std::to_chars(buffer, buffer + sizeof(buffer), m(r, c));
      out.append(buffer, result.ptr);
    }
    out += '\n';
  }
  return out;
}

}  // namespace fuel
