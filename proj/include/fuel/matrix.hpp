#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <span>
#include <string>
#include <vector>

namespace fuel {

// Row-major so that one row is one node embedding, contiguous in memory.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

using Labels = std::vector<int>;
using NodePair = std::pair<int, int>;

void require_finite(const Matrix& m, const std::string& what);
bool all_finite(std::span<const double> values);

// Exact pairwise Euclidean distances between rows of a and rows of b.
// threads > 1 partitions rows of a across workers; every entry is computed by the same
// sequence of operations regardless of thread count, so results are bitwise identical.
Matrix pairwise_euclidean(const Matrix& a, const Matrix& b, int threads = 1);

// Symmetric distance matrix of the rows of x via the Gram expansion
// ||xi||^2 + ||xj||^2 - 2 xi.xj. Faster than pairwise_euclidean for large d;
// squared distances below a relative cancellation floor are set to exactly zero.
Matrix gram_distances(const Matrix& x);

inline std::span<double> as_span(Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
inline std::span<const double> as_span(const Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
inline std::span<double> as_span(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Rows of m selected by index, in the given order.
Matrix gather_rows(const Matrix& m, std::span<const int> rows);

}  // namespace fuel
