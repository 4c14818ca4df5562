#include "fuel/cluster_metrics.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "fuel/conv_select.hpp"
#include "fuel/error.hpp"
#include "fuel/rng.hpp"

namespace fuel {

CalinskiHarabasz calinski_harabasz(const Matrix& z, std::span<const int> labels) {
  require(static_cast<Eigen::Index>(labels.size()) == z.rows(), ErrorCode::LengthMismatch,
          "calinski_harabasz: label count != rows");
  std::map<int, std::vector<Eigen::Index>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) groups[labels[i]].push_back(static_cast<Eigen::Index>(i));
  }
  Eigen::Index n = 0;
  for (const auto& [_, members] : groups) n += static_cast<Eigen::Index>(members.size());
  const auto k = static_cast<Eigen::Index>(groups.size());
  require(k >= 2, ErrorCode::DegenerateLabels, "calinski_harabasz: need at least 2 non-empty groups");
  require(n > k, ErrorCode::DegenerateLabels, "calinski_harabasz: need more points than groups");

  Eigen::RowVectorXd global = Eigen::RowVectorXd::Zero(z.cols());
  for (const auto& [_, members] : groups) {
    for (auto i : members) global += z.row(i);
  }
  global /= static_cast<double>(n);
  double between = 0.0;
  double within = 0.0;
  for (const auto& [_, members] : groups) {
    Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(z.cols());
    for (auto i : members) centroid += z.row(i);
    centroid /= static_cast<double>(members.size());
    between += static_cast<double>(members.size()) * (centroid - global).squaredNorm();
    for (auto i : members) within += (z.row(i) - centroid).squaredNorm();
  }
  CalinskiHarabasz out;
  if (within == 0.0) {
    out.score = std::numeric_limits<double>::infinity();
    out.zero_within_variance = true;
    return out;
  }
  out.score = (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
  return out;
}

namespace {

struct LloydRun {
  Labels assignment;
  double inertia = 0.0;
  int iterations = 0;
  std::vector<double> trace;
  bool repaired = false;
};

double assign(const Matrix& z, const Matrix& centers, Labels& assignment, Vector& point_cost) {
  double inertia = 0.0;
  const Vector center_sq = centers.rowwise().squaredNorm();
  const Matrix cross = z * centers.transpose();
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    Eigen::Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
      // Ranking by ||c||^2 - 2 x.c is exact up to the constant ||x||^2.
      const double d = center_sq(c) - 2.0 * cross(i, c);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    assignment[static_cast<std::size_t>(i)] = static_cast<int>(best);
    point_cost(i) = (z.row(i) - centers.row(best)).squaredNorm();
    inertia += point_cost(i);
  }
  return inertia;
}

double inertia_of(const Matrix& z, const Matrix& centers, const Labels& assignment) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    total += (z.row(i) - centers.row(assignment[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

LloydRun lloyd(const Matrix& z, int k, Rng& rng, const KMeansOptions& options) {
  Matrix centers = kmeanspp_seeds(z, k, rng);
  LloydRun run;
  run.assignment.assign(static_cast<std::size_t>(z.rows()), 0);
  Vector point_cost(z.rows());
  double previous = assign(z, centers, run.assignment, point_cost);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    // Update step.
    Matrix sums = Matrix::Zero(k, z.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      const int c = run.assignment[static_cast<std::size_t>(i)];
      sums.row(c) += z.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Move the empty centroid onto the worst-served point; that point's cost drops to 0.
      Eigen::Index far = 0;
      point_cost.maxCoeff(&far);
      centers.row(c) = z.row(far);
      const int old = run.assignment[static_cast<std::size_t>(far)];
      --counts[static_cast<std::size_t>(old)];
      run.assignment[static_cast<std::size_t>(far)] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      point_cost(far) = 0.0;
      run.repaired = true;
    }
    const double updated = inertia_of(z, centers, run.assignment);
    const double current = assign(z, centers, run.assignment, point_cost);
    const double slack = 1e-9 * std::max(1.0, previous);
    if (updated > previous + slack || current > updated + slack) {
      throw std::logic_error("kmeans: inertia increased during a Lloyd iteration");
    }
    run.trace.push_back(current);
    run.iterations = iter + 1;
    const bool converged = previous - current <= options.tolerance * std::max(previous, 1e-300);
    previous = current;
    if (converged) break;
  }
  run.inertia = previous;
  return run;
}

}  // namespace

ClusteringResult kmeans(const Matrix& z, int k, std::uint64_t seed, const KMeansOptions& options) {
  require(z.rows() > 0, ErrorCode::EmptyInput, "kmeans: no points");
  require(k >= 1 && k <= z.rows(), ErrorCode::InvalidArgument,
          "kmeans: need 1 <= K <= rows, got K=" + std::to_string(k));
  require(options.restarts >= 1, ErrorCode::InvalidArgument, "kmeans: restarts must be >= 1");
  ClusteringResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(derive_seed(seed, "kmeans/restart", static_cast<std::uint64_t>(r)));
    LloydRun run = lloyd(z, k, rng, options);
    if (run.inertia < best.inertia) {
      best.assignment = std::move(run.assignment);
      best.inertia = run.inertia;
      best.iterations = run.iterations;
      best.inertia_trace = std::move(run.trace);
      best.repaired_empty_cluster = run.repaired;
    }
  }
  return best;
}

namespace {

struct Contingency {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows;
  std::map<int, double> cols;
  double n = 0.0;
};

Contingency contingency(std::span<const int> a, std::span<const int> b) {
  require(a.size() == b.size(), ErrorCode::LengthMismatch,
          "label vectors differ in length: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  Contingency t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    t.joint[{a[i], b[i]}] += 1.0;
    t.rows[a[i]] += 1.0;
    t.cols[b[i]] += 1.0;
  }
  t.n = static_cast<double>(a.size());
  return t;
}

double entropy(const std::map<int, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [_, c] : counts) h -= (c / n) * std::log(c / n);
  return h;
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

double nmi(std::span<const int> a, std::span<const int> b) {
  require(!a.empty(), ErrorCode::EmptyInput, "nmi: empty labelings");
  const Contingency t = contingency(a, b);
  const double ha = entropy(t.rows, t.n);
  const double hb = entropy(t.cols, t.n);
  if (ha == 0.0 && hb == 0.0) return 1.0;  // both constant: identical partitions
  if (ha == 0.0 || hb == 0.0) return 0.0;
  double mi = 0.0;
  for (const auto& [key, c] : t.joint) {
    mi += (c / t.n) * std::log(c * t.n / (t.rows.at(key.first) * t.cols.at(key.second)));
  }
  return std::clamp(mi / (0.5 * (ha + hb)), 0.0, 1.0);
}

double ari(std::span<const int> a, std::span<const int> b) {
  const Contingency t = contingency(a, b);
  double index = 0.0;
  for (const auto& [_, c] : t.joint) index += choose2(c);
  double sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [_, c] : t.rows) sum_rows += choose2(c);
  for (const auto& [_, c] : t.cols) sum_cols += choose2(c);
  const double total = choose2(t.n);
  if (total == 0.0) return 1.0;
  const double expected = sum_rows * sum_cols / total;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;  // both partitions trivial in the same way
  return (index - expected) / (max_index - expected);
}

}  // namespace fuel
