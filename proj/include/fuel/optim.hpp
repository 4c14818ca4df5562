#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fuel {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Coupled L2 penalty added to the gradient before the moment update.
  double weight_decay = 0.0;
};

// Adam with bias correction. Moment buffers are sized on the first step and the
// parameter block must keep that size afterwards.
class Adam {
 public:
  explicit Adam(AdamConfig config) : config_(config) {}

  // Throws ShapeMismatch or NonFiniteGradient; params are untouched on error.
  void step(std::span<double> params, std::span<const double> grads);

  std::int64_t steps() const noexcept { return steps_; }
  const AdamConfig& config() const noexcept { return config_; }
  std::span<const double> first_moment() const noexcept { return first_; }
  std::span<const double> second_moment() const noexcept { return second_; }

 private:
  AdamConfig config_;
  std::vector<double> first_;
  std::vector<double> second_;
  std::int64_t steps_ = 0;
};

// Objective evaluated at x. When grad is non-empty the function also writes the
// analytic gradient into it.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

// max_k |analytic_k - central_difference_k| / max(1, |analytic_k|).
double finite_diff_check(const Objective& objective, std::span<const double> params, double epsilon = 1e-6);

}  // namespace fuel
