#include <algorithm>

#include "fuel/cluster_metrics.hpp"
#include "fuel/conv_select.hpp"
#include "fuel/error.hpp"
#include "fuel/stats.hpp"
#include "fuel/theory.hpp"

namespace fuel {

ProxyResult proxy_experiment(const Graph& graph, int trials, double train_frac, std::uint64_t seed,
                             const ProxyOptions& options) {
  require(graph.has_labels(), ErrorCode::UnlabeledEndpoint, "proxy experiment needs a labeled graph");
  require(graph.num_classes >= 2, ErrorCode::DegenerateLabels, "proxy experiment needs at least 2 classes");
  require(trials >= 2, ErrorCode::InvalidArgument, "proxy experiment needs at least 2 trials");
  require(train_frac > 0.0 && train_frac < 1.0, ErrorCode::InvalidArgument, "train_frac must lie in (0, 1)");

  ProxyResult result;
  result.low_trial_warning = trials < 10;

  std::vector<int> labeled;
  for (int i = 0; i < graph.num_nodes; ++i) {
    if (graph.labels[static_cast<std::size_t>(i)] >= 0) labeled.push_back(i);
  }
  Rng split_rng(derive_seed(seed, "proxy/split"));
  split_rng.shuffle(std::span<int>(labeled));
  const auto n_train = std::max<std::size_t>(1, static_cast<std::size_t>(train_frac * static_cast<double>(labeled.size()) + 0.5));
  result.split.train.assign(labeled.begin(), labeled.begin() + static_cast<std::ptrdiff_t>(n_train));
  result.split.test.assign(labeled.begin() + static_cast<std::ptrdiff_t>(n_train), labeled.end());
  std::sort(result.split.train.begin(), result.split.train.end());
  std::sort(result.split.test.begin(), result.split.test.end());

  const ConvBases bases = compute_conv_bases(graph);
  Rng alpha_rng(derive_seed(seed, "proxy/alphas"));
  ProbeConfig probe_config = options.probe_config;
  probe_config.seed = derive_seed(seed, "proxy/probe");
  const std::uint64_t kmeans_seed = derive_seed(seed, "proxy/kmeans");

  std::vector<double> lcs, acc;
  for (int t = 0; t < trials; ++t) {
    ProxyTrial trial;
    if (options.alpha_sampler) {
      trial.alphas = options.alpha_sampler(alpha_rng);
    } else {
      const double u0 = alpha_rng.uniform(), u1 = alpha_rng.uniform(), u2 = alpha_rng.uniform();
      const double total = u0 + u1 + u2;
      trial.alphas = {u0 / total, u1 / total, u2 / total};
    }
    const Matrix z = mix_bases(bases, trial.alphas);
    if (options.latent == LatentClassMode::KMeans) {
      const auto clusters = kmeans(z, graph.num_classes, kmeans_seed, {.restarts = options.kmeans_restarts});
      trial.lcs = calinski_harabasz(z, clusters.assignment).score;
    } else {
      trial.lcs = calinski_harabasz(z, graph.labels).score;
    }
    trial.accuracy = run_probe(options.probe, z, graph.labels, result.split, probe_config).test_accuracy;
    lcs.push_back(trial.lcs);
    acc.push_back(trial.accuracy);
    result.trials.push_back(trial);
  }
  result.rho = spearman(lcs, acc);
  return result;
}

}  // namespace fuel
