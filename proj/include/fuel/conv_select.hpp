#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fuel/graph.hpp"
#include "fuel/matrix.hpp"
#include "fuel/rng.hpp"

namespace fuel {

// Three raw logits; the mixing weights are their softmax.
struct ConvWeights {
  std::array<double, 3> logits{0.0, 0.0, 0.0};

  std::array<double, 3> alphas() const;
  // A zero weight maps to a -inf logit so that boundary mixes such as (1, 0, 0) are exact.
  static ConvWeights from_alphas(const std::array<double, 3>& alphas);
};

struct ClusterHead {
  Matrix centroids;  // C x d

  int clusters() const { return static_cast<int>(centroids.rows()); }
};

struct AssignmentMatrix {
  Matrix probs;      // |V| x C, rows on the simplex
  Labels hard;       // argmax per row, lowest index on ties
};

struct Step1Config {
  int clusters = 0;  // 0 means "number of classes in the dataset"
  double lambda = 1.0;
  int epochs = 300;
  double lr_logits = 0.05;
  double lr_centroids = 0.01;
  int pair_sample = 0;  // pairs per kind per epoch in sampled mode; 0 means 10 |V|
  int pair_exact_threshold = 3000;
  std::uint64_t seed = 0;
};

// X* = a0 b0 + a1 b1 + a2 b2.
Matrix forward_embed(const ConvBases& bases, const ConvWeights& weights);
Matrix mix_bases(const ConvBases& bases, const std::array<double, 3>& alphas);

AssignmentMatrix assignment_probs(const Matrix& xstar, const ClusterHead& head);

// Mean per-node assignment entropy.
double loss_sharpness(const AssignmentMatrix& assignments);
// Negative entropy of the mean assignment; minimum -log C at a uniform marginal.
double loss_balance(const AssignmentMatrix& assignments);

// Pair source for the separation loss: all pairs (exact) or a fresh uniform sample
// of M intra- and M inter-cluster pairs.
class SeparationPairs {
 public:
  static SeparationPairs exact() { return SeparationPairs(0, nullptr); }
  static SeparationPairs sampled(int pairs_per_kind, Rng& rng) { return SeparationPairs(pairs_per_kind, &rng); }

  bool is_exact() const { return rng_ == nullptr; }
  int pairs_per_kind() const { return pairs_per_kind_; }
  Rng* rng() const { return rng_; }

 private:
  SeparationPairs(int m, Rng* rng) : pairs_per_kind_(m), rng_(rng) {}
  int pairs_per_kind_;
  Rng* rng_;
};

// exp(mean intra-cluster distance - mean inter-cluster distance) under hard assignments.
// Throws DegenerateClustering when either pair class is empty. grad, when given,
// receives dL3/dX* with pair membership held fixed.
double loss_separation(const Matrix& xstar, std::span<const int> hard, const SeparationPairs& pairs,
                       Matrix* grad = nullptr);

// Uniform samples of same-cluster and cross-cluster pairs.
std::vector<NodePair> sample_intra_pairs(std::span<const int> hard, int count, Rng& rng);
std::vector<NodePair> sample_inter_pairs(std::span<const int> hard, int count, Rng& rng);

struct ClusteringLoss {
  double sharpness = 0.0;
  double balance = 0.0;
  double separation = 0.0;
  double total = 0.0;
};

struct ClusteringGradient {
  std::array<double, 3> logits{};
  Matrix centroids;
};

// Coefficients of the three terms; total = sharpness L1 + balance L2 + separation L3.
struct LossTerms {
  double sharpness = 1.0;
  double balance = 1.0;
  double separation = 1.0;
};

// Weighted loss at the given parameters, with gradients w.r.t. logits and centroids.
// If frozen_hard is non-empty the separation pairs use it instead of the argmax of P.
// L3 is not evaluated when its coefficient is zero.
ClusteringLoss clustering_loss(const ConvBases& bases, const ConvWeights& weights, const ClusterHead& head,
                               const LossTerms& terms, const SeparationPairs& pairs, ClusteringGradient* grad,
                               std::span<const int> frozen_hard = {});
// L1 + L2 + lambda L3.
ClusteringLoss clustering_loss(const ConvBases& bases, const ConvWeights& weights, const ClusterHead& head,
                               double lambda, const SeparationPairs& pairs, ClusteringGradient* grad,
                               std::span<const int> frozen_hard = {});

struct Step1Epoch {
  int epoch = 0;
  ClusteringLoss loss;
  std::array<double, 3> alphas{};
};

struct Step1Result {
  ConvWeights weights;
  ClusterHead head;
  Matrix h;  // (a0 I + a1 A~ + a2 A~^2) X with the optimized weights
  AssignmentMatrix assignments;
  std::vector<Step1Epoch> trace;
  int resolved_clusters = 0;
  int resolved_pair_sample = 0;
  bool exact_pairs = true;
};

// k-means++ seeding: chooses C distinct rows of x as initial centroids.
Matrix kmeanspp_seeds(const Matrix& x, int count, Rng& rng);

Step1Result train_step1(const ConvBases& bases, int clusters, const Step1Config& config);
Step1Result train_step1(const Graph& graph, const Step1Config& config);

}  // namespace fuel
