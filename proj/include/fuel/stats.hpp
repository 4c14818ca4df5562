#pragma once

#include <span>
#include <vector>

namespace fuel {

// Numerically stable softmax (max-subtracted).
std::vector<double> softmax(std::span<const double> logits);

// Backward pass of softmax: given probabilities p and dL/dp, returns dL/dlogits.
std::vector<double> softmax_backward(std::span<const double> probs, std::span<const double> grad_probs);

// 1-based ranks with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> values);

double pearson(std::span<const double> xs, std::span<const double> ys);

// Pearson correlation of average ranks. Throws LengthMismatch or DegenerateInput.
double spearman(std::span<const double> xs, std::span<const double> ys);

double mean(std::span<const double> values);
// Population standard deviation (divides by n).
double stddev(std::span<const double> values);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace fuel
