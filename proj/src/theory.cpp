#include "fuel/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "fuel/error.hpp"
#include "fuel/rng.hpp"
#include "fuel/stats.hpp"

namespace fuel {

void validate(const SyntheticConfig& cfg) {
  require(cfg.n >= 1, ErrorCode::InvalidArgument, "synthetic: n must be >= 1");
  require(cfg.n0 >= 0 && cfg.n0 <= cfg.n, ErrorCode::InvalidArgument, "synthetic: need 0 <= n0 <= n");
  require(cfg.sigma > 0.0, ErrorCode::InvalidArgument, "synthetic: sigma must be positive");
  require(cfg.w >= 0.0 && cfg.w <= 1.0, ErrorCode::InvalidArgument, "synthetic: w must lie in [0, 1]");
}

ClassMoments class_moments(const SyntheticConfig& cfg) {
  validate(cfg);
  const double n = cfg.n;
  const double n1 = cfg.n - cfg.n0;
  const double w = cfg.w;
  ClassMoments m;
  m.mean = cfg.mu * ((1.0 - w) + w * (cfg.n0 - n1) / n);
  m.stddev = cfg.sigma * std::sqrt((1.0 - w) * (1.0 - w) + w * w / n);
  return m;
}

double cs_closed_form(const SyntheticConfig& cfg) {
  const auto m = class_moments(cfg);
  if (m.stddev == 0.0) return 1.0;
  return normal_cdf(std::abs(m.mean) / m.stddev);
}

double lcs_closed_form(const SyntheticConfig& cfg) {
  const auto m = class_moments(cfg);
  if (m.stddev == 0.0) return std::numeric_limits<double>::infinity();
  return 4.0 * m.mean * m.mean / (m.stddev * m.stddev);
}

namespace {

constexpr std::int64_t kShardSize = 1 << 16;

std::int64_t simulate_shard(const SyntheticConfig& cfg, double decision_sign, std::int64_t begin, std::int64_t end,
                            Rng& rng) {
  const int n1 = cfg.n - cfg.n0;
  std::int64_t correct = 0;
  for (std::int64_t s = begin; s < end; ++s) {
    const bool class0 = (s % 2) == 0;
    const double own_mean = class0 ? cfg.mu : -cfg.mu;
    const double x = rng.normal(own_mean, cfg.sigma);
    double neighbor_sum = 0.0;
    for (int k = 0; k < cfg.n0; ++k) neighbor_sum += rng.normal(own_mean, cfg.sigma);
    for (int k = 0; k < n1; ++k) neighbor_sum += rng.normal(-own_mean, cfg.sigma);
    const double z = (1.0 - cfg.w) * x + cfg.w * neighbor_sum / cfg.n;
    // Equal priors and variances: pick class 0 iff z lies on class 0's side of the midpoint.
    const bool predict0 = decision_sign == 0.0 ? true : z * decision_sign > 0.0;
    correct += predict0 == class0 ? 1 : 0;
  }
  return correct;
}

}  // namespace

double cs_monte_carlo(const SyntheticConfig& cfg, std::int64_t samples, std::uint64_t seed, int threads) {
  validate(cfg);
  require(samples >= 1, ErrorCode::InvalidArgument, "cs_monte_carlo: samples must be positive");
  const double m = class_moments(cfg).mean;
  const double decision_sign = m > 0.0 ? 1.0 : (m < 0.0 ? -1.0 : 0.0);
  const std::int64_t shards = (samples + kShardSize - 1) / kShardSize;
  std::vector<std::int64_t> correct(static_cast<std::size_t>(shards), 0);
  const auto run = [&](std::int64_t shard) {
    Rng rng(derive_seed(seed, "cs_monte_carlo", static_cast<std::uint64_t>(shard)));
    const std::int64_t begin = shard * kShardSize;
    const std::int64_t end = std::min(samples, begin + kShardSize);
    correct[static_cast<std::size_t>(shard)] = simulate_shard(cfg, decision_sign, begin, end, rng);
  };
  const int workers = static_cast<int>(std::clamp<std::int64_t>(threads, 1, shards));
  if (workers == 1) {
    for (std::int64_t s = 0; s < shards; ++s) run(s);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::int64_t s = t; s < shards; s += workers) run(s);
      });
    }
  }
  std::int64_t total = 0;
  for (auto c : correct) total += c;
  return static_cast<double>(total) / static_cast<double>(samples);
}

double theorem1_region_low(int n, int n0) {
  if (n0 == n) return 0.0;
  return std::max(static_cast<double>(n - 2 * n0) / static_cast<double>(2 * n - 2 * n0), 0.0);
}

Theorem1Report theorem1_check(int n, int n0, double step, double mu, double sigma) {
  require(step > 0.0 && step <= 0.5, ErrorCode::InvalidArgument, "grid step must lie in (0, 0.5]");
  require(n >= 1 && n0 >= 0 && n0 <= n, ErrorCode::InvalidArgument, "need n >= 1 and 0 <= n0 <= n");
  Theorem1Report report;
  report.n = n;
  report.n0 = n0;
  report.step = step;
  report.region_low = theorem1_region_low(n, n0);
  const auto points = static_cast<int>(std::floor(1.0 / step + 1e-9));
  for (int k = 0; k <= points; ++k) {
    const double w = std::min(1.0, k * step);
    if (w >= report.region_low - 1e-12) report.grid.push_back(w);
  }
  if (report.grid.empty() || report.grid.back() < 1.0 - 1e-12) report.grid.push_back(1.0);
  require(!report.grid.empty(), ErrorCode::InvalidRegion, "valid w-region contains no grid points");

  std::vector<double> cs, lcs;
  for (double w : report.grid) {
    SyntheticConfig cfg{.n = n, .n0 = n0, .mu = mu, .sigma = sigma, .w = w};
    cs.push_back(cs_closed_form(cfg));
    lcs.push_back(lcs_closed_form(cfg));
  }
  constexpr double kTie = 1e-12;
  const auto sign = [](double d) { return std::abs(d) <= kTie ? 0 : (d > 0.0 ? 1 : -1); };
  for (std::size_t a = 0; a < report.grid.size(); ++a) {
    for (std::size_t b = a + 1; b < report.grid.size(); ++b) {
      ++report.cases;
      const int s_cs = sign(cs[a] - cs[b]);
      const int s_lcs = sign(lcs[a] - lcs[b]);
      if (s_cs != 0 && s_lcs != 0 && s_cs != s_lcs) {
        report.violations.push_back({report.grid[a], report.grid[b], cs[a] - cs[b], lcs[a] - lcs[b]});
      }
    }
  }
  report.pass = report.violations.empty();
  return report;
}

}  // namespace fuel
