#include "fuel/embedding_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fuel/error.hpp"
#include "fuel/text_io.hpp"
#include "json.hpp"

namespace fuel {

namespace fs = std::filesystem;

namespace {

fs::path with_suffix(const fs::path& stem, const std::string& suffix) { return fs::path(stem.string() + suffix); }

fs::path stem_of(const fs::path& path) {
  const std::string s = path.string();
  for (const std::string suffix : {".meta.json", ".bin", ".csv"}) {
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return fs::path(s.substr(0, s.size() - suffix.size()));
    }
  }
  return path;
}

std::uint64_t to_little(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((bits >> (8 * i)) & 0xFF) << (8 * (7 - i));
    return out;
  }
  return bits;
}

}  // namespace

void write_embedding(const fs::path& stem, const Matrix& m, bool csv) {
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());
  {
    std::ofstream out(with_suffix(stem, ".bin"), std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::MissingFile, "cannot write " + with_suffix(stem, ".bin").string());
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(m.data()[i]));
      out.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
    }
  }
  nlohmann::ordered_json meta = {{"rows", m.rows()},
                                 {"cols", m.cols()},
                                 {"dtype", "f64"},
                                 {"layout", "row-major"},
                                 {"endianness", "little"}};
  std::ofstream(with_suffix(stem, ".meta.json"), std::ios::binary) << meta.dump(2) << "\n";
  if (csv) std::ofstream(with_suffix(stem, ".csv"), std::ios::binary) << matrix_to_csv(m);
}

Matrix read_embedding(const fs::path& path) {
  const fs::path stem = stem_of(path);
  const fs::path meta_path = with_suffix(stem, ".meta.json");
  const fs::path bin_path = with_suffix(stem, ".bin");
  require(fs::exists(meta_path), ErrorCode::MissingFile, meta_path.string());
  require(fs::exists(bin_path), ErrorCode::MissingFile, bin_path.string());
  nlohmann::json meta;
  try {
    std::ifstream in(meta_path);
    meta = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, meta_path.string() + ": " + e.what());
  }
  require(meta.value("dtype", "") == "f64" && meta.value("layout", "") == "row-major" &&
              meta.value("endianness", "") == "little",
          ErrorCode::ParseError, meta_path.string() + ": unsupported dtype/layout/endianness");
  const auto rows = meta.at("rows").get<Eigen::Index>();
  const auto cols = meta.at("cols").get<Eigen::Index>();
  const auto expected = static_cast<std::uintmax_t>(rows * cols) * sizeof(double);
  require(fs::file_size(bin_path) == expected, ErrorCode::ShapeMismatch,
          bin_path.string() + ": size does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  Matrix m(rows, cols);
  std::ifstream in(bin_path, std::ios::binary);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    std::uint64_t bits = 0;
    in.read(reinterpret_cast<char*>(&bits), sizeof(bits));
    m.data()[i] = std::bit_cast<double>(to_little(bits));
  }
  require_finite(m, bin_path.string());
  return m;
}

}  // namespace fuel
