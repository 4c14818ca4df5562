#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include "doctest.h"
#include "fuel/error.hpp"
#include "fuel/graph.hpp"
#include "fuel/rng.hpp"

#define CHECK_THROWS_CODE(expr, expected)                                   \
  do {                                                                      \
    bool thrown_ = false;                                                   \
    try {                                                                   \
      (void)(expr);                                                         \
    } catch (const fuel::Error& e_) {                                       \
      thrown_ = true;                                                       \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());                    \
    }                                                                       \
    CHECK_MESSAGE(thrown_, "expected " << fuel::to_string(expected));       \
  } while (0)

namespace testutil {

inline fuel::Matrix random_matrix(int rows, int cols, fuel::Rng& rng, double scale = 1.0) {
  fuel::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
  return m;
}

inline fuel::Matrix column(std::initializer_list<double> values) {
  fuel::Matrix m(static_cast<int>(values.size()), 1);
  int i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

inline fuel::Graph path3(fuel::Matrix x = column({1, 2, 3})) {
  return fuel::make_graph("path", 3, {{0, 1}, {1, 2}}, std::move(x));
}

// Erdos-Renyi graph with Gaussian features, used by property tests.
inline fuel::Graph random_graph(int n, int d, double p, fuel::Rng& rng, int classes = 0) {
  std::vector<fuel::NodePair> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p) edges.emplace_back(i, j);
  fuel::Labels labels;
  if (classes > 0)
    for (int i = 0; i < n; ++i) labels.push_back(static_cast<int>(rng.below(classes)));
  return fuel::make_graph("random", n, edges, random_matrix(n, d, rng), labels, {}, classes > 0 ? classes : -1);
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("fuel_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testutil
