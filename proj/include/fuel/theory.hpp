#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "fuel/graph.hpp"
#include "fuel/probe.hpp"
#include "fuel/rng.hpp"

namespace fuel {

// Two equal classes with scalar features N(+mu, sigma^2) and N(-mu, sigma^2); every node
// has n neighbors, n0 of them in its own class. The embedding mixes the node's own
// feature with the neighbor mean: z = (1 - w) x + w * mean(neighbors).
struct SyntheticConfig {
  int n = 4;
  int n0 = 2;
  double mu = 1.0;
  double sigma = 1.0;
  double w = 0.0;
  int num_nodes = 100;
  int feature_dim = 1;  // gen_synthetic only: independent copies of the scalar model
};

void validate(const SyntheticConfig& cfg);

// Class-0 mean m(w) and stddev s(w) of z (class 1 has mean -m), neighbors drawn independently.
struct ClassMoments {
  double mean = 0.0;
  double stddev = 0.0;
};
ClassMoments class_moments(const SyntheticConfig& cfg);

// Bayes accuracy Phi(|m| / s); 1 when s = 0.
double cs_closed_form(const SyntheticConfig& cfg);
// (2m)^2 / s^2; +inf when s = 0.
double lcs_closed_form(const SyntheticConfig& cfg);

// Fraction of simulated nodes the Bayes rule classifies correctly. Samples are split into
// fixed-size shards with seeds derived from (seed, shard index), so the estimate does not
// depend on the number of worker threads.
double cs_monte_carlo(const SyntheticConfig& cfg, std::int64_t samples, std::uint64_t seed, int threads = 1);

struct OrderingViolation {
  double w = 0.0;
  double w_prime = 0.0;
  double cs_diff = 0.0;
  double lcs_diff = 0.0;
};

struct Theorem1Report {
  int n = 0;
  int n0 = 0;
  double step = 0.0;
  double region_low = 0.0;
  std::vector<double> grid;
  std::int64_t cases = 0;
  bool pass = false;
  std::vector<OrderingViolation> violations;
};

// Lower end of the w-interval on which the ordering equivalence is asserted.
double theorem1_region_low(int n, int n0);

// Checks sign(CS(w) - CS(w')) == sign(LCS(w) - LCS(w')) for every grid pair in the region.
// Differences within 1e-12 count as ties and never as violations.
Theorem1Report theorem1_check(int n, int n0, double step, double mu = 1.0, double sigma = 1.0);

// Graph whose every node has exactly n0 same-class and n - n0 cross-class neighbors,
// built by stub matching with rejection of self-loops and repeated edges.
Graph gen_synthetic(const SyntheticConfig& cfg, std::uint64_t seed);

enum class LatentClassMode { KMeans, Labels };

struct ProxyOptions {
  LatentClassMode latent = LatentClassMode::KMeans;
  ProbeKind probe = ProbeKind::Linear;
  ProbeConfig probe_config{};
  int kmeans_restarts = 10;
  // Draws one coefficient triple; defaults to three uniforms divided by their sum.
  std::function<std::array<double, 3>(Rng&)> alpha_sampler;
};

struct ProxyTrial {
  std::array<double, 3> alphas{};
  double lcs = 0.0;
  double accuracy = 0.0;
};

struct ProxyResult {
  std::vector<ProxyTrial> trials;
  double rho = 0.0;
  bool low_trial_warning = false;
  Split split;
};

// Random mixing weights (uniform then normalized), CH index of the mixed embedding over
// latent classes vs probe accuracy on a train_frac / rest split; Spearman over the trials.
ProxyResult proxy_experiment(const Graph& graph, int trials, double train_frac, std::uint64_t seed,
                             const ProxyOptions& options = {});

}  // namespace fuel
