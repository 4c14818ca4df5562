#pragma once

#include <span>
#include <vector>

#include "fuel/matrix.hpp"

namespace fuel {

// exp((mean positive-pair distance - mean negative-pair distance) / tau), the shared
// form of the clustering separation loss and the refinement distance loss.
struct PairLossValue {
  double loss = 0.0;
  double positive_mean = 0.0;
  double negative_mean = 0.0;
  std::size_t positive_count = 0;
  std::size_t negative_count = 0;
};

// Pairs are grouped by a membership vector: same group = positive, different = negative.
// Every unordered pair of nodes is enumerated. grad (n x d), when given, receives dLoss/dX.
PairLossValue exp_pair_loss_by_group(const Matrix& x, std::span<const int> group, double tau, Matrix* grad);

// Explicit positive set; negatives are every remaining unordered pair.
PairLossValue exp_pair_loss_complement(const Matrix& x, std::span<const NodePair> positives, double tau, Matrix* grad);

// Explicit positive and negative pair lists (duplicates count with multiplicity).
PairLossValue exp_pair_loss_lists(const Matrix& x, std::span<const NodePair> positives,
                                  std::span<const NodePair> negatives, double tau, Matrix* grad);

}  // namespace fuel
