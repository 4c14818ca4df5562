#include "fuel/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "fuel/error.hpp"

namespace fuel {

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

void require_finite(const Matrix& m, const std::string& what) {
  require(all_finite(as_span(m)), ErrorCode::NonFiniteValue, what + " contains non-finite entries");
}

namespace {

void distance_rows(const Matrix& a, const Matrix& b, Matrix& out, Eigen::Index begin, Eigen::Index end) {
  for (Eigen::Index i = begin; i < end; ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      double sum = 0.0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) {
        const double diff = a(i, k) - b(j, k);
        sum += diff * diff;
      }
      out(i, j) = std::sqrt(sum);
    }
  }
}

}  // namespace

Matrix pairwise_euclidean(const Matrix& a, const Matrix& b, int threads) {
  require(a.cols() == b.cols(), ErrorCode::ShapeMismatch,
          "pairwise_euclidean: column counts " + std::to_string(a.cols()) + " and " + std::to_string(b.cols()));
  Matrix out(a.rows(), b.rows());
  if (threads <= 1 || a.rows() < 2) {
    distance_rows(a, b, out, 0, a.rows());
    return out;
  }
  const Eigen::Index workers = std::min<Eigen::Index>(threads, a.rows());
  const Eigen::Index chunk = (a.rows() + workers - 1) / workers;
  std::vector<std::jthread> pool;
  for (Eigen::Index w = 0; w < workers; ++w) {
    const Eigen::Index begin = w * chunk;
    const Eigen::Index end = std::min(a.rows(), begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] { distance_rows(a, b, out, begin, end); });
  }
  return out;
}

Matrix gram_distances(const Matrix& x) {
  const Eigen::Index n = x.rows();
  Matrix gram = x * x.transpose();
  const Vector sq = gram.diagonal();
  Matrix dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double scale = sq(i) + sq(j);
      double d2 = scale - 2.0 * gram(i, j);
      if (d2 <= 1e-13 * scale) d2 = 0.0;
      const double d = std::sqrt(d2);
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

Matrix gather_rows(const Matrix& m, std::span<const int> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = m.row(rows[r]);
  return out;
}

}  // namespace fuel
