#include "fuel/conv_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuel/error.hpp"
#include "fuel/optim.hpp"
#include "fuel/pair_loss.hpp"
#include "fuel/stats.hpp"

namespace fuel {

std::array<double, 3> ConvWeights::alphas() const {
  const auto p = softmax(logits);
  return {p[0], p[1], p[2]};
}

ConvWeights ConvWeights::from_alphas(const std::array<double, 3>& alphas) {
  require(alphas[0] + alphas[1] + alphas[2] > 0.0, ErrorCode::InvalidArgument, "from_alphas: weights sum to zero");
  ConvWeights w;
  for (int k = 0; k < 3; ++k) {
    require(alphas[k] >= 0.0, ErrorCode::InvalidArgument, "from_alphas: weights must be non-negative");
    w.logits[k] = alphas[k] > 0.0 ? std::log(alphas[k]) : -std::numeric_limits<double>::infinity();
  }
  return w;
}

Matrix mix_bases(const ConvBases& bases, const std::array<double, 3>& alphas) {
  require(bases.b1.rows() == bases.b0.rows() && bases.b2.rows() == bases.b0.rows() &&
              bases.b1.cols() == bases.b0.cols() && bases.b2.cols() == bases.b0.cols(),
          ErrorCode::ShapeMismatch, "convolution bases differ in shape");
  Matrix out = alphas[0] * bases.b0;
  if (alphas[1] != 0.0) out += alphas[1] * bases.b1;
  if (alphas[2] != 0.0) out += alphas[2] * bases.b2;
  return out;
}

Matrix forward_embed(const ConvBases& bases, const ConvWeights& weights) { return mix_bases(bases, weights.alphas()); }

AssignmentMatrix assignment_probs(const Matrix& xstar, const ClusterHead& head) {
  require(xstar.cols() == head.centroids.cols(), ErrorCode::ShapeMismatch,
          "embedding dim " + std::to_string(xstar.cols()) + " vs centroid dim " + std::to_string(head.centroids.cols()));
  AssignmentMatrix out;
  out.probs = xstar * head.centroids.transpose();
  out.hard.resize(static_cast<std::size_t>(xstar.rows()));
  for (Eigen::Index i = 0; i < out.probs.rows(); ++i) {
    auto row = out.probs.row(i);
    Eigen::Index best = 0;
    const double top = row.maxCoeff(&best);  // first maximum
    row = (row.array() - top).exp();
    row /= row.sum();
    out.hard[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

namespace {

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

Vector marginal(const Matrix& probs) {
  return probs.colwise().sum().transpose() / static_cast<double>(probs.rows());
}

}  // namespace

double loss_sharpness(const AssignmentMatrix& a) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < a.probs.size(); ++i) total -= xlogx(a.probs.data()[i]);
  return total / static_cast<double>(a.probs.rows());
}

double loss_balance(const AssignmentMatrix& a) {
  const Vector pbar = marginal(a.probs);
  double total = 0.0;
  for (Eigen::Index c = 0; c < pbar.size(); ++c) total += xlogx(pbar(c));
  return total;
}

namespace {

std::vector<std::vector<int>> members_by_cluster(std::span<const int> hard) {
  std::vector<std::vector<int>> members;
  for (std::size_t i = 0; i < hard.size(); ++i) {
    const auto c = static_cast<std::size_t>(hard[i]);
    if (c >= members.size()) members.resize(c + 1);
    members[c].push_back(static_cast<int>(i));
  }
  return members;
}

std::size_t pick_weighted(const std::vector<double>& cumulative, Rng& rng) {
  const double target = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

}  // namespace

std::vector<NodePair> sample_intra_pairs(std::span<const int> hard, int count, Rng& rng) {
  const auto members = members_by_cluster(hard);
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& m : members) {
    const auto s = static_cast<double>(m.size());
    acc += s * (s - 1.0) / 2.0;
    cumulative.push_back(acc);
  }
  require(acc > 0.0, ErrorCode::DegenerateClustering, "no intra-cluster pairs");
  std::vector<NodePair> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    std::size_t c = pick_weighted(cumulative, rng);
    while (members[c].size() < 2) c = pick_weighted(cumulative, rng);
    const auto& m = members[c];
    const auto a = rng.below(m.size());
    auto b = rng.below(m.size() - 1);
    if (b >= a) ++b;
    out.emplace_back(m[a], m[b]);
  }
  return out;
}

std::vector<NodePair> sample_inter_pairs(std::span<const int> hard, int count, Rng& rng) {
  const auto members = members_by_cluster(hard);
  const auto n = static_cast<double>(hard.size());
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& m : members) {
    const auto s = static_cast<double>(m.size());
    acc += s * (n - s);
    cumulative.push_back(acc);
  }
  require(acc > 0.0, ErrorCode::DegenerateClustering, "no inter-cluster pairs (single cluster)");
  std::vector<NodePair> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    std::size_t c = pick_weighted(cumulative, rng);
    while (members[c].empty() || members[c].size() == hard.size()) c = pick_weighted(cumulative, rng);
    const int i = members[c][rng.below(members[c].size())];
    // j uniform among nodes of the other clusters, in cluster-major order.
    auto r = rng.below(hard.size() - members[c].size());
    int j = -1;
    for (std::size_t other = 0; other < members.size(); ++other) {
      if (other == c) continue;
      if (r < members[other].size()) {
        j = members[other][r];
        break;
      }
      r -= members[other].size();
    }
    out.emplace_back(i, j);
  }
  return out;
}

double loss_separation(const Matrix& xstar, std::span<const int> hard, const SeparationPairs& pairs, Matrix* grad) {
  require(static_cast<Eigen::Index>(hard.size()) == xstar.rows(), ErrorCode::ShapeMismatch,
          "hard assignment length != rows");
  if (pairs.is_exact()) return exp_pair_loss_by_group(xstar, hard, 1.0, grad).loss;
  const auto intra = sample_intra_pairs(hard, pairs.pairs_per_kind(), *pairs.rng());
  const auto inter = sample_inter_pairs(hard, pairs.pairs_per_kind(), *pairs.rng());
  return exp_pair_loss_lists(xstar, intra, inter, 1.0, grad).loss;
}

ClusteringLoss clustering_loss(const ConvBases& bases, const ConvWeights& weights, const ClusterHead& head,
                               double lambda, const SeparationPairs& pairs, ClusteringGradient* grad,
                               std::span<const int> frozen_hard) {
  return clustering_loss(bases, weights, head, LossTerms{1.0, 1.0, lambda}, pairs, grad, frozen_hard);
}

ClusteringLoss clustering_loss(const ConvBases& bases, const ConvWeights& weights, const ClusterHead& head,
                               const LossTerms& terms, const SeparationPairs& pairs, ClusteringGradient* grad,
                               std::span<const int> frozen_hard) {
  const double lambda = terms.separation;
  const auto alphas = weights.alphas();
  const Matrix xstar = mix_bases(bases, alphas);
  const AssignmentMatrix a = assignment_probs(xstar, head);
  const std::span<const int> hard = frozen_hard.empty() ? std::span<const int>(a.hard) : frozen_hard;

  ClusteringLoss loss;
  loss.sharpness = loss_sharpness(a);
  loss.balance = loss_balance(a);
  Matrix grad_sep;
  if (lambda > 0.0) loss.separation = loss_separation(xstar, hard, pairs, grad ? &grad_sep : nullptr);
  loss.total = terms.sharpness * loss.sharpness + terms.balance * loss.balance + lambda * loss.separation;
  if (grad == nullptr) return loss;

  const auto n = static_cast<double>(xstar.rows());
  const Vector pbar = marginal(a.probs);
  Matrix dscores(a.probs.rows(), a.probs.cols());
  for (Eigen::Index i = 0; i < a.probs.rows(); ++i) {
    double inner = 0.0;
    for (Eigen::Index c = 0; c < a.probs.cols(); ++c) {
      const double p = a.probs(i, c);
      const double sharp = p > 0.0 ? -terms.sharpness * (std::log(p) + 1.0) / n : 0.0;
      const double bal = pbar(c) > 0.0 ? terms.balance * (std::log(pbar(c)) + 1.0) / n : 0.0;
      dscores(i, c) = sharp + bal;
      inner += p * dscores(i, c);
    }
    for (Eigen::Index c = 0; c < a.probs.cols(); ++c) dscores(i, c) = a.probs(i, c) * (dscores(i, c) - inner);
  }
  grad->centroids = dscores.transpose() * xstar;
  Matrix dxstar = dscores * head.centroids;
  if (lambda > 0.0) dxstar += lambda * grad_sep;
  std::array<double, 3> dalpha{};
  for (int k = 0; k < 3; ++k) dalpha[k] = dxstar.cwiseProduct(bases[k]).sum();
  const auto dlogits = softmax_backward(alphas, dalpha);
  for (int k = 0; k < 3; ++k) grad->logits[k] = dlogits[k];
  return loss;
}

Matrix kmeanspp_seeds(const Matrix& x, int count, Rng& rng) {
  const auto n = x.rows();
  require(count >= 1 && count <= n, ErrorCode::InvalidArgument,
          "k-means++: need 1 <= k <= rows, got k=" + std::to_string(count));
  std::vector<Eigen::Index> chosen;
  chosen.push_back(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  Vector best = (x.rowwise() - x.row(chosen[0])).rowwise().squaredNorm();
  while (static_cast<int>(chosen.size()) < count) {
    const double total = best.sum();
    Eigen::Index next = -1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += best(i);
        if (best(i) > 0.0 && acc > target) {
          next = i;
          break;
        }
      }
      if (next < 0) {
        for (Eigen::Index i = n - 1; i >= 0; --i) {
          if (best(i) > 0.0) {
            next = i;
            break;
          }
        }
      }
    } else {
      // Every remaining row coincides with a chosen seed: fall back to an unused index.
      std::vector<char> used(static_cast<std::size_t>(n), 0);
      for (auto c : chosen) used[static_cast<std::size_t>(c)] = 1;
      std::vector<Eigen::Index> unused;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!used[static_cast<std::size_t>(i)]) unused.push_back(i);
      }
      next = unused[rng.below(unused.size())];
    }
    chosen.push_back(next);
    best = best.cwiseMin((x.rowwise() - x.row(next)).rowwise().squaredNorm());
  }
  Matrix seeds(count, x.cols());
  for (int k = 0; k < count; ++k) seeds.row(k) = x.row(chosen[static_cast<std::size_t>(k)]);
  return seeds;
}

Step1Result train_step1(const ConvBases& bases, int clusters, const Step1Config& config) {
  require(clusters >= 2, ErrorCode::InvalidArgument, "step1: need at least 2 clusters");
  require(config.lambda >= 0.0, ErrorCode::InvalidArgument, "step1: lambda must be >= 0");
  require(config.epochs >= 1, ErrorCode::InvalidArgument, "step1: epochs must be >= 1");
  require(config.pair_sample >= 0, ErrorCode::InvalidArgument, "step1: pair_sample must be >= 1 (or 0 for default)");
  const auto n = static_cast<int>(bases.rows());
  require(n > clusters, ErrorCode::InvalidArgument, "step1: need more nodes than clusters");

  Step1Result result;
  result.resolved_clusters = clusters;
  result.exact_pairs = n <= config.pair_exact_threshold;
  result.resolved_pair_sample = config.pair_sample > 0 ? config.pair_sample : 10 * n;

  Rng init_rng(derive_seed(config.seed, "step1/centroids"));
  Rng pair_rng(derive_seed(config.seed, "step1/pairs"));
  ConvWeights weights;
  ClusterHead head{kmeanspp_seeds(forward_embed(bases, weights), clusters, init_rng)};
  const SeparationPairs pairs =
      result.exact_pairs ? SeparationPairs::exact() : SeparationPairs::sampled(result.resolved_pair_sample, pair_rng);

  Adam logit_opt({.learning_rate = config.lr_logits});
  Adam centroid_opt({.learning_rate = config.lr_centroids});
  ClusteringGradient grad;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Step1Epoch record;
    record.epoch = epoch;
    record.alphas = weights.alphas();
    try {
      record.loss = clustering_loss(bases, weights, head, config.lambda, pairs, &grad);
    } catch (const Error& e) {
      throw TrainingError(e.code(), epoch, e.what());
    }
    if (!std::isfinite(record.loss.total)) {
      result.trace.push_back(record);
      throw TrainingError(ErrorCode::NonFiniteLoss, epoch, "step1 clustering loss is not finite");
    }
    result.trace.push_back(record);
    try {
      logit_opt.step(weights.logits, grad.logits);
      centroid_opt.step(as_span(head.centroids), as_span(grad.centroids));
    } catch (const Error& e) {
      throw TrainingError(e.code(), epoch, e.what());
    }
  }
  result.weights = weights;
  result.head = head;
  result.h = forward_embed(bases, weights);
  result.assignments = assignment_probs(result.h, head);
  return result;
}

Step1Result train_step1(const Graph& graph, const Step1Config& config) {
  const int clusters = config.clusters > 0 ? config.clusters : graph.num_classes;
  return train_step1(compute_conv_bases(graph), clusters, config);
}

}  // namespace fuel
