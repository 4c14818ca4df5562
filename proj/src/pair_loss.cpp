#include "fuel/pair_loss.hpp"

#include <cmath>

#include "fuel/error.hpp"

namespace fuel {

namespace {

// weights(i, j) holds +1/|P| for positive pairs and -1/|N| for negative pairs (symmetric,
// zero diagonal). Consumes weights as scratch space.
PairLossValue finish_dense(const Matrix& x, const Matrix& dist, Matrix& weights, PairLossValue value, double tau,
                           Matrix* grad) {
  const Eigen::Index n = x.rows();
  double exponent = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) exponent += weights(i, j) * dist(i, j);
  }
  value.positive_mean = 0.0;
  value.negative_mean = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (weights(i, j) > 0.0) value.positive_mean += weights(i, j) * dist(i, j);
      else value.negative_mean -= weights(i, j) * dist(i, j);
    }
  }
  value.loss = std::exp(exponent / tau);
  if (grad == nullptr) return value;

  // d dist_ij / d x_i = (x_i - x_j) / dist_ij, so dE/dX = (diag(rowsum M) - M) X with M = W / D.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = dist(i, j);
      weights(i, j) = (i == j || d == 0.0) ? 0.0 : weights(i, j) / d;
    }
  }
  const Vector row_sums = weights.rowwise().sum();
  *grad = row_sums.asDiagonal() * x;
  grad->noalias() -= weights * x;
  *grad *= value.loss / tau;
  return value;
}

}  // namespace

PairLossValue exp_pair_loss_by_group(const Matrix& x, std::span<const int> group, double tau, Matrix* grad) {
  const auto n = static_cast<Eigen::Index>(group.size());
  require(x.rows() == n, ErrorCode::ShapeMismatch, "pair loss: group vector length != rows");
  require(tau > 0.0, ErrorCode::InvalidArgument, "pair loss: tau must be positive");
  std::vector<std::size_t> sizes;
  for (int g : group) {
    require(g >= 0, ErrorCode::InvalidArgument, "pair loss: negative group id");
    if (static_cast<std::size_t>(g) >= sizes.size()) sizes.resize(static_cast<std::size_t>(g) + 1, 0);
    ++sizes[static_cast<std::size_t>(g)];
  }
  const auto total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2;
  std::size_t positives = 0;
  for (auto s : sizes) positives += s * (s > 0 ? s - 1 : 0) / 2;
  const std::size_t negatives = total - positives;
  require(positives > 0, ErrorCode::DegenerateClustering, "no intra-group pairs");
  require(negatives > 0, ErrorCode::DegenerateClustering, "no inter-group pairs (single group)");

  const Matrix dist = gram_distances(x);
  Matrix weights(n, n);
  const double wp = 1.0 / static_cast<double>(positives);
  const double wn = -1.0 / static_cast<double>(negatives);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) weights(i, j) = i == j ? 0.0 : (group[i] == group[j] ? wp : wn);
  }
  PairLossValue value;
  value.positive_count = positives;
  value.negative_count = negatives;
  return finish_dense(x, dist, weights, value, tau, grad);
}

PairLossValue exp_pair_loss_complement(const Matrix& x, std::span<const NodePair> positives, double tau,
                                       Matrix* grad) {
  const Eigen::Index n = x.rows();
  require(tau > 0.0, ErrorCode::InvalidArgument, "pair loss: tau must be positive");
  const auto total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2;
  require(!positives.empty(), ErrorCode::EmptyPairSet, "positive pair set is empty");
  Matrix weights = Matrix::Zero(n, n);
  std::size_t count = 0;
  for (auto [i, j] : positives) {
    require(i != j && i >= 0 && j >= 0 && i < n && j < n, ErrorCode::IndexOutOfRange, "positive pair out of range");
    if (weights(i, j) == 0.0) ++count;
    weights(i, j) = weights(j, i) = 1.0;
  }
  require(count < total, ErrorCode::EmptyPairSet, "negative pair set (complement) is empty");
  const double wp = 1.0 / static_cast<double>(count);
  const double wn = -1.0 / static_cast<double>(total - count);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) weights(i, j) = i == j ? 0.0 : (weights(i, j) > 0.0 ? wp : wn);
  }
  PairLossValue value;
  value.positive_count = count;
  value.negative_count = total - count;
  return finish_dense(x, gram_distances(x), weights, value, tau, grad);
}

PairLossValue exp_pair_loss_lists(const Matrix& x, std::span<const NodePair> positives,
                                  std::span<const NodePair> negatives, double tau, Matrix* grad) {
  require(!positives.empty(), ErrorCode::EmptyPairSet, "positive pair set is empty");
  require(!negatives.empty(), ErrorCode::EmptyPairSet, "negative pair set is empty");
  require(tau > 0.0, ErrorCode::InvalidArgument, "pair loss: tau must be positive");
  const auto n = x.rows();
  const auto distance = [&](const NodePair& p) {
    require(p.first >= 0 && p.second >= 0 && p.first < n && p.second < n, ErrorCode::IndexOutOfRange,
            "pair index out of range");
    return (x.row(p.first) - x.row(p.second)).norm();
  };
  PairLossValue value;
  value.positive_count = positives.size();
  value.negative_count = negatives.size();
  for (const auto& p : positives) value.positive_mean += distance(p);
  for (const auto& p : negatives) value.negative_mean += distance(p);
  value.positive_mean /= static_cast<double>(positives.size());
  value.negative_mean /= static_cast<double>(negatives.size());
  value.loss = std::exp((value.positive_mean - value.negative_mean) / tau);
  if (grad == nullptr) return value;

  *grad = Matrix::Zero(x.rows(), x.cols());
  const auto accumulate = [&](std::span<const NodePair> pairs, double weight) {
    for (auto [i, j] : pairs) {
      const Eigen::RowVectorXd diff = x.row(i) - x.row(j);
      const double d = diff.norm();
      if (d == 0.0) continue;
      grad->row(i) += (weight / d) * diff;
      grad->row(j) -= (weight / d) * diff;
    }
  };
  const double scale = value.loss / tau;
  accumulate(positives, scale / static_cast<double>(positives.size()));
  accumulate(negatives, -scale / static_cast<double>(negatives.size()));
  return value;
}

}  // namespace fuel
