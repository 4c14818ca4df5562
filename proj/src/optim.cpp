#include "fuel/optim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fuel/error.hpp"
#include "fuel/matrix.hpp"

namespace fuel {

void Adam::step(std::span<double> params, std::span<const double> grads) {
  require(params.size() == grads.size(), ErrorCode::ShapeMismatch,
          "adam: " + std::to_string(params.size()) + " params vs " + std::to_string(grads.size()) + " grads");
  if (steps_ == 0 && first_.empty()) {
    first_.assign(params.size(), 0.0);
    second_.assign(params.size(), 0.0);
  }
  require(first_.size() == params.size(), ErrorCode::ShapeMismatch,
          "adam: parameter block changed size from " + std::to_string(first_.size()));
  require(all_finite(grads), ErrorCode::NonFiniteGradient, "adam: gradient contains non-finite entries");

  ++steps_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i] + config_.weight_decay * params[i];
    first_[i] = b1 * first_[i] + (1.0 - b1) * g;
    second_[i] = b2 * second_[i] + (1.0 - b2) * g * g;
    const double m_hat = first_[i] / correction1;
    const double v_hat = second_[i] / correction2;
    params[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

double finite_diff_check(const Objective& objective, std::span<const double> params, double epsilon) {
  std::vector<double> x(params.begin(), params.end());
  std::vector<double> analytic(x.size(), 0.0);
  objective(x, analytic);
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    x[k] = saved + epsilon;
    const double up = objective(x, {});
    x[k] = saved - epsilon;
    const double down = objective(x, {});
    x[k] = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    worst = std::max(worst, std::abs(analytic[k] - numeric) / std::max(1.0, std::abs(analytic[k])));
  }
  return worst;
}

}  // namespace fuel
