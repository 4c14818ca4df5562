#pragma once

#include <cstdint>
#include <vector>

#include "fuel/matrix.hpp"
#include "fuel/rng.hpp"

namespace fuel {

// f(H) = tanh(H W1^T + b1) W2^T + b2; the output width equals the input width so the
// skip connection Z = f(H) + H is well defined.
struct RefinerParams {
  Matrix w1;  // hidden x d
  Vector b1;  // hidden
  Matrix w2;  // d x hidden
  Vector b2;  // d

  int input_dim() const { return static_cast<int>(w1.cols()); }
  int hidden() const { return static_cast<int>(w1.rows()); }

  // Glorot-uniform first layer, zero output layer (so the initial Z equals H).
  static RefinerParams initialize(int dim, int hidden, Rng& rng);

  std::vector<double> flatten() const;
  void unflatten(std::span<const double> flat);
  std::size_t parameter_count() const;
};

struct NeighborPairs {
  int num_nodes = 0;
  int neighbors_per_node = 0;
  std::vector<std::vector<int>> neighbors;  // nearest first, distance ties by lower index
  std::vector<NodePair> positives;          // unordered, (i < j), sorted, deduplicated

  bool contains(int a, int b) const;
};

NeighborPairs knn_pairs(const Matrix& h, int neighbors);

// M unordered pairs outside the positive set, drawn uniformly by rejection.
std::vector<NodePair> sample_negatives(const NeighborPairs& pairs, int count, Rng& rng);

Matrix refine_forward(const Matrix& h, const RefinerParams& params);

double loss_refine(const Matrix& z, std::span<const NodePair> positives, std::span<const NodePair> negatives,
                   double tau);
// Negatives are every unordered pair not in positives.
double loss_refine_complement(const Matrix& z, std::span<const NodePair> positives, double tau);

// Loss and parameter gradient (same layout as RefinerParams::flatten). When negatives is
// empty the full complement of the positives is used.
double refine_objective(const Matrix& h, const RefinerParams& params, std::span<const NodePair> positives,
                        std::span<const NodePair> negatives, double tau, std::vector<double>* grad);

struct Step2Config {
  int knn = 10;
  double tau = 1.0;
  int hidden = 0;  // 0 means the embedding width
  int epochs = 200;
  double lr = 1e-3;
  int neg_sample = 0;  // sampled negatives per epoch; 0 means 10 |V|
  int pair_exact_threshold = 3000;
  std::uint64_t seed = 0;
};

struct Step2Result {
  Matrix z;
  RefinerParams params;
  NeighborPairs pairs;
  std::vector<double> trace;
  bool exact_negatives = true;
  int resolved_hidden = 0;
  int resolved_neg_sample = 0;
};

Step2Result train_step2(const Matrix& h, const Step2Config& config);

}  // namespace fuel
