#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fuel/matrix.hpp"

namespace fuel {

struct CalinskiHarabasz {
  double score = 0.0;  // +inf when the within-group dispersion is zero
  bool zero_within_variance = false;
};

// [B / (K - 1)] / [W / (n - K)] over the non-empty groups of labels (negative labels ignored).
CalinskiHarabasz calinski_harabasz(const Matrix& z, std::span<const int> labels);

struct ClusteringResult {
  Labels assignment;
  double inertia = 0.0;
  int iterations = 0;
  std::vector<double> inertia_trace;  // one entry per Lloyd iteration of the winning restart
  bool repaired_empty_cluster = false;
};

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
  double tolerance = 1e-6;  // relative inertia change
};

// k-means++ initialization followed by Lloyd iterations; best restart by inertia.
// Empty clusters are re-seeded at the point farthest from its assigned centroid.
ClusteringResult kmeans(const Matrix& z, int k, std::uint64_t seed, const KMeansOptions& options = {});

// Mutual information normalized by the arithmetic mean of the two entropies.
double nmi(std::span<const int> a, std::span<const int> b);
double ari(std::span<const int> a, std::span<const int> b);

}  // namespace fuel
