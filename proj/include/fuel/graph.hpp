#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fuel/matrix.hpp"

namespace fuel {

struct Split {
  std::vector<int> train;
  std::vector<int> val;
  std::vector<int> test;
};

// Undirected, unweighted graph with dense node features. Construct through
// make_graph or load_dataset, both of which enforce the invariants below:
// symmetric 0/1 adjacency, empty diagonal, no duplicate edges, finite features,
// split indices in range and disjoint within each split.
struct Graph {
  std::string name;
  int num_nodes = 0;
  int num_classes = 0;
  SparseMatrix adjacency;
  Matrix features;
  Labels labels;  // empty when unlabeled; -1 marks an unlabeled node
  std::vector<Split> splits;

  int feature_dim() const { return static_cast<int>(features.cols()); }
  int degree(int node) const { return adjacency.outerIndexPtr()[node + 1] - adjacency.outerIndexPtr()[node]; }
  std::vector<int> degrees() const;
  std::size_t num_edges() const { return static_cast<std::size_t>(adjacency.nonZeros()) / 2; }
  // Undirected edges as (u, v) with u < v, sorted.
  std::vector<NodePair> edges() const;
  bool has_labels() const { return !labels.empty(); }
};

// Builds and validates a graph from an undirected edge list (either orientation
// accepted, each unordered pair at most once).
Graph make_graph(std::string name, int num_nodes, const std::vector<NodePair>& edges, Matrix features,
                 Labels labels = {}, std::vector<Split> splits = {}, int num_classes = -1);

// Throws on any invariant violation.
void validate(const Graph& graph);

// Divides every nonzero row by its sum; empty rows stay empty.
SparseMatrix row_normalize(const SparseMatrix& matrix);

// row_normalize(A * A). The diagonal of A^2 (node degrees) is kept.
SparseMatrix two_hop_normalized(const SparseMatrix& adjacency);

// The three propagation bases mixed by the adaptive convolution.
struct ConvBases {
  Matrix b0;  // X
  Matrix b1;  // row-normalized A times X
  Matrix b2;  // row-normalized A^2 times X

  const Matrix& operator[](int k) const { return k == 0 ? b0 : (k == 1 ? b1 : b2); }
  Eigen::Index rows() const { return b0.rows(); }
  Eigen::Index cols() const { return b0.cols(); }
};

ConvBases compute_conv_bases(const Graph& graph);

// Fraction of undirected edges whose endpoints share a label.
double edge_homophily(const Graph& graph, std::span<const int> labels);
double edge_homophily(const Graph& graph);

// Dataset directory: meta.json, edges.tsv, features.csv, optional labels.txt and splits.json.
Graph load_dataset(const std::filesystem::path& dir);
void save_dataset(const Graph& graph, const std::filesystem::path& dir);

// Class-stratified random splits with the given train/val fractions (rest is test).
std::vector<Split> stratified_splits(std::span<const int> labels, int count, double train_frac, double val_frac,
                                     std::uint64_t seed);

}  // namespace fuel
