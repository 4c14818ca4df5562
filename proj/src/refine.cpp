#include "fuel/refine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fuel/error.hpp"
#include "fuel/optim.hpp"
#include "fuel/pair_loss.hpp"

namespace fuel {

RefinerParams RefinerParams::initialize(int dim, int hidden, Rng& rng) {
  require(dim >= 1 && hidden >= 1, ErrorCode::InvalidArgument, "refiner: dimensions must be positive");
  RefinerParams p;
  const double bound = std::sqrt(6.0 / static_cast<double>(dim + hidden));
  p.w1.resize(hidden, dim);
  for (Eigen::Index i = 0; i < p.w1.size(); ++i) p.w1.data()[i] = (2.0 * rng.uniform() - 1.0) * bound;
  p.b1 = Vector::Zero(hidden);
  p.w2 = Matrix::Zero(dim, hidden);
  p.b2 = Vector::Zero(dim);
  return p;
}

std::size_t RefinerParams::parameter_count() const {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size());
}

std::vector<double> RefinerParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  flat.insert(flat.end(), w1.data(), w1.data() + w1.size());
  flat.insert(flat.end(), b1.data(), b1.data() + b1.size());
  flat.insert(flat.end(), w2.data(), w2.data() + w2.size());
  flat.insert(flat.end(), b2.data(), b2.data() + b2.size());
  return flat;
}

void RefinerParams::unflatten(std::span<const double> flat) {
  require(flat.size() == parameter_count(), ErrorCode::ShapeMismatch, "refiner: flat parameter size");
  auto it = flat.begin();
  const auto take = [&](double* dst, Eigen::Index count) {
    std::copy(it, it + count, dst);
    it += count;
  };
  take(w1.data(), w1.size());
  take(b1.data(), b1.size());
  take(w2.data(), w2.size());
  take(b2.data(), b2.size());
}

bool NeighborPairs::contains(int a, int b) const {
  const NodePair key{std::min(a, b), std::max(a, b)};
  return std::binary_search(positives.begin(), positives.end(), key);
}

NeighborPairs knn_pairs(const Matrix& h, int neighbors) {
  const auto n = static_cast<int>(h.rows());
  require(neighbors >= 1, ErrorCode::InvalidArgument, "knn: N must be >= 1");
  require(n >= 2, ErrorCode::InvalidArgument, "knn: need at least 2 nodes");
  const int k = std::min(neighbors, n - 1);
  // Exact differences (not the Gram expansion) so equal distances compare equal.
  Matrix dist(n, n);
  for (int i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = (h.row(i) - h.row(j)).norm();
  }
  NeighborPairs out;
  out.num_nodes = n;
  out.neighbors_per_node = k;
  out.neighbors.resize(static_cast<std::size_t>(n));
  std::vector<int> order(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    std::size_t slot = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) order[slot++] = j;
    }
    const auto closer = [&](int a, int b) { return dist(i, a) < dist(i, b) || (dist(i, a) == dist(i, b) && a < b); };
    std::partial_sort(order.begin(), order.begin() + k, order.end(), closer);
    auto& list = out.neighbors[static_cast<std::size_t>(i)];
    list.assign(order.begin(), order.begin() + k);
    for (int j : list) out.positives.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(out.positives.begin(), out.positives.end());
  out.positives.erase(std::unique(out.positives.begin(), out.positives.end()), out.positives.end());
  return out;
}

std::vector<NodePair> sample_negatives(const NeighborPairs& pairs, int count, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(pairs.num_nodes);
  const auto total = n * (n - 1) / 2;
  require(pairs.positives.size() < total, ErrorCode::ComplementEmpty, "every pair is a positive pair");
  std::vector<NodePair> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    const auto a = static_cast<int>(rng.below(n));
    const auto b = static_cast<int>(rng.below(n));
    if (a == b || pairs.contains(a, b)) continue;
    out.emplace_back(std::min(a, b), std::max(a, b));
  }
  return out;
}

namespace {

struct ForwardCache {
  Matrix hidden;  // tanh activations, n x hidden
  Matrix z;
};

ForwardCache forward(const Matrix& h, const RefinerParams& p) {
  require(h.cols() == p.w1.cols(), ErrorCode::ShapeMismatch,
          "refiner: input width " + std::to_string(h.cols()) + " vs " + std::to_string(p.w1.cols()));
  ForwardCache c;
  c.hidden = h * p.w1.transpose();
  c.hidden.rowwise() += p.b1.transpose();
  c.hidden = c.hidden.array().tanh().matrix();
  c.z = c.hidden * p.w2.transpose();
  c.z.rowwise() += p.b2.transpose();
  c.z += h;
  return c;
}

}  // namespace

Matrix refine_forward(const Matrix& h, const RefinerParams& params) { return forward(h, params).z; }

double loss_refine(const Matrix& z, std::span<const NodePair> positives, std::span<const NodePair> negatives,
                   double tau) {
  return exp_pair_loss_lists(z, positives, negatives, tau, nullptr).loss;
}

double loss_refine_complement(const Matrix& z, std::span<const NodePair> positives, double tau) {
  return exp_pair_loss_complement(z, positives, tau, nullptr).loss;
}

double refine_objective(const Matrix& h, const RefinerParams& params, std::span<const NodePair> positives,
                        std::span<const NodePair> negatives, double tau, std::vector<double>* grad) {
  const ForwardCache c = forward(h, params);
  Matrix dz;
  Matrix* dz_ptr = grad ? &dz : nullptr;
  const double loss = negatives.empty() ? exp_pair_loss_complement(c.z, positives, tau, dz_ptr).loss
                                        : exp_pair_loss_lists(c.z, positives, negatives, tau, dz_ptr).loss;
  if (grad == nullptr) return loss;

  RefinerParams g;
  g.w2 = dz.transpose() * c.hidden;
  g.b2 = dz.colwise().sum().transpose();
  Matrix dpre = dz * params.w2;
  dpre.array() *= 1.0 - c.hidden.array().square();
  g.w1 = dpre.transpose() * h;
  g.b1 = dpre.colwise().sum().transpose();
  *grad = g.flatten();
  return loss;
}

Step2Result train_step2(const Matrix& h, const Step2Config& config) {
  require(config.tau > 0.0, ErrorCode::InvalidArgument, "step2: tau must be positive");
  require(config.epochs >= 0, ErrorCode::InvalidArgument, "step2: epochs must be >= 0");
  require(config.lr >= 0.0, ErrorCode::InvalidArgument, "step2: learning rate must be >= 0");
  require_finite(h, "step2 input");
  const auto n = static_cast<int>(h.rows());

  Step2Result result;
  result.pairs = knn_pairs(h, config.knn);
  result.exact_negatives = n <= config.pair_exact_threshold;
  result.resolved_hidden = config.hidden > 0 ? config.hidden : static_cast<int>(h.cols());
  result.resolved_neg_sample = config.neg_sample > 0 ? config.neg_sample : 10 * n;

  Rng init_rng(derive_seed(config.seed, "step2/init"));
  Rng neg_rng(derive_seed(config.seed, "step2/negatives"));
  result.params = RefinerParams::initialize(static_cast<int>(h.cols()), result.resolved_hidden, init_rng);

  Adam opt({.learning_rate = config.lr});
  std::vector<double> flat = result.params.flatten();
  std::vector<double> grad;
  std::vector<NodePair> negatives;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (!result.exact_negatives) negatives = sample_negatives(result.pairs, result.resolved_neg_sample, neg_rng);
    double loss = 0.0;
    try {
      loss = refine_objective(h, result.params, result.pairs.positives, negatives, config.tau, &grad);
    } catch (const Error& e) {
      throw TrainingError(e.code(), epoch, e.what());
    }
    result.trace.push_back(loss);
    if (!std::isfinite(loss)) throw TrainingError(ErrorCode::NonFiniteLoss, epoch, "step2 distance loss is not finite");
    try {
      opt.step(flat, grad);
    } catch (const Error& e) {
      throw TrainingError(e.code(), epoch, e.what());
    }
    result.params.unflatten(flat);
  }
  result.z = refine_forward(h, result.params);
  return result;
}

}  // namespace fuel
