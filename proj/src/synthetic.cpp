#include <algorithm>
#include <unordered_set>

#include "fuel/error.hpp"
#include "fuel/rng.hpp"
#include "fuel/theory.hpp"

namespace fuel {

namespace {

constexpr int kMaxAttempts = 100;

std::uint64_t edge_key(int u, int v, int n) {
  if (u > v) std::swap(u, v);
  return static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(v);
}

// Pairs stubs two at a time, rejecting self-loops and repeated edges. Returns false when
// the attempt gets stuck (the caller restarts from scratch).
bool match_stubs(std::vector<int> left, std::vector<int> right, bool bipartite, int num_nodes, Rng& rng,
                 std::unordered_set<std::uint64_t>& edges, std::vector<NodePair>& out) {
  std::vector<NodePair> added;
  std::size_t failures = 0;
  const auto remaining = [&] { return bipartite ? left.size() : left.size() / 2; };
  while (!left.empty()) {
    if (failures > 50 * remaining() + 1000) {
      for (auto [u, v] : added) edges.erase(edge_key(u, v, num_nodes));
      return false;
    }
    std::size_t a = 0, b = 0;
    int u = 0, v = 0;
    if (bipartite) {
      a = rng.below(left.size());
      b = rng.below(right.size());
      u = left[a];
      v = right[b];
    } else {
      a = rng.below(left.size());
      b = rng.below(left.size() - 1);
      if (b >= a) ++b;
      u = left[a];
      v = left[b];
    }
    if (u == v || edges.contains(edge_key(u, v, num_nodes))) {
      ++failures;
      continue;
    }
    edges.insert(edge_key(u, v, num_nodes));
    added.emplace_back(u, v);
    if (bipartite) {
      std::swap(left[a], left.back());
      left.pop_back();
      std::swap(right[b], right.back());
      right.pop_back();
    } else {
      const auto hi = std::max(a, b), lo = std::min(a, b);
      std::swap(left[hi], left.back());
      left.pop_back();
      std::swap(left[lo], left.back());
      left.pop_back();
    }
  }
  out.insert(out.end(), added.begin(), added.end());
  return true;
}

}  // namespace

Graph gen_synthetic(const SyntheticConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  require(cfg.feature_dim >= 1, ErrorCode::InvalidArgument, "synthetic: feature_dim must be >= 1");
  const int half = cfg.num_nodes / 2;
  const int n1 = cfg.n - cfg.n0;
  require(cfg.num_nodes >= 2 && cfg.num_nodes % 2 == 0, ErrorCode::InfeasibleDegreeSequence,
          "num_nodes must be even and >= 2");
  require((static_cast<long>(half) * cfg.n0) % 2 == 0, ErrorCode::InfeasibleDegreeSequence,
          "same-class stub count per class (" + std::to_string(half) + " x " + std::to_string(cfg.n0) + ") is odd");
  require(cfg.n0 <= half - 1, ErrorCode::InfeasibleDegreeSequence,
          "n0 = " + std::to_string(cfg.n0) + " exceeds class size - 1 = " + std::to_string(half - 1));
  require(n1 <= half, ErrorCode::InfeasibleDegreeSequence,
          "n - n0 = " + std::to_string(n1) + " exceeds class size " + std::to_string(half));

  Rng rng(derive_seed(seed, "synthetic/graph"));
  std::vector<NodePair> edges;
  bool built = false;
  for (int attempt = 0; attempt < kMaxAttempts && !built; ++attempt) {
    edges.clear();
    std::unordered_set<std::uint64_t> seen;
    built = true;
    for (int cls = 0; cls < 2 && built; ++cls) {
      std::vector<int> stubs;
      for (int i = 0; i < half; ++i) {
        for (int k = 0; k < cfg.n0; ++k) stubs.push_back(cls * half + i);
      }
      built = match_stubs(std::move(stubs), {}, false, cfg.num_nodes, rng, seen, edges);
    }
    if (!built) continue;
    std::vector<int> left, right;
    for (int i = 0; i < half; ++i) {
      for (int k = 0; k < n1; ++k) {
        left.push_back(i);
        right.push_back(half + i);
      }
    }
    built = match_stubs(std::move(left), std::move(right), true, cfg.num_nodes, rng, seen, edges);
  }
  require(built, ErrorCode::RetriesExhausted,
          "stub matching failed after " + std::to_string(kMaxAttempts) + " attempts");

  Rng feature_rng(derive_seed(seed, "synthetic/features"));
  Matrix features(cfg.num_nodes, cfg.feature_dim);
  Labels labels(static_cast<std::size_t>(cfg.num_nodes));
  for (int i = 0; i < cfg.num_nodes; ++i) {
    const int cls = i < half ? 0 : 1;
    labels[static_cast<std::size_t>(i)] = cls;
    for (int d = 0; d < cfg.feature_dim; ++d) features(i, d) = feature_rng.normal(cls == 0 ? cfg.mu : -cfg.mu, cfg.sigma);
  }
  auto splits = stratified_splits(labels, 10, 0.48, 0.32, derive_seed(seed, "synthetic/splits"));
  const std::string name = "synthetic_n" + std::to_string(cfg.n) + "_n0_" + std::to_string(cfg.n0);
  return make_graph(name, cfg.num_nodes, edges, std::move(features), std::move(labels), std::move(splits), 2);
}

}  // namespace fuel
