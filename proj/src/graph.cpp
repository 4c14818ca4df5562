#include "fuel/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "fuel/error.hpp"
#include "fuel/rng.hpp"

namespace fuel {

std::vector<int> Graph::degrees() const {
  std::vector<int> out(static_cast<std::size_t>(num_nodes));
  for (int i = 0; i < num_nodes; ++i) out[static_cast<std::size_t>(i)] = degree(i);
  return out;
}

std::vector<NodePair> Graph::edges() const {
  std::vector<NodePair> out;
  out.reserve(num_edges());
  for (int u = 0; u < adjacency.outerSize(); ++u) {
    for (SparseMatrix::InnerIterator it(adjacency, u); it; ++it) {
      if (u < it.col()) out.emplace_back(u, it.col());
    }
  }
  return out;
}

namespace {

void validate_splits(const std::vector<Split>& splits, int num_nodes) {
  for (std::size_t s = 0; s < splits.size(); ++s) {
    std::vector<char> seen(static_cast<std::size_t>(num_nodes), 0);
    const auto check = [&](const std::vector<int>& part, const char* name) {
      for (int idx : part) {
        require(idx >= 0 && idx < num_nodes, ErrorCode::IndexOutOfRange,
                "split " + std::to_string(s) + " " + name + " index " + std::to_string(idx));
        require(!seen[static_cast<std::size_t>(idx)], ErrorCode::InvalidSplit,
                "split " + std::to_string(s) + ": node " + std::to_string(idx) + " appears twice");
        seen[static_cast<std::size_t>(idx)] = 1;
      }
    };
    check(splits[s].train, "train");
    check(splits[s].val, "val");
    check(splits[s].test, "test");
  }
}

}  // namespace

Graph make_graph(std::string name, int num_nodes, const std::vector<NodePair>& edges, Matrix features,
                 Labels labels, std::vector<Split> splits, int num_classes) {
  require(num_nodes >= 0, ErrorCode::InvalidArgument, "negative node count");
  require(features.rows() == num_nodes, ErrorCode::ShapeMismatch,
          "feature rows " + std::to_string(features.rows()) + " != num_nodes " + std::to_string(num_nodes));
  require(labels.empty() || static_cast<int>(labels.size()) == num_nodes, ErrorCode::ShapeMismatch,
          "label count " + std::to_string(labels.size()) + " != num_nodes " + std::to_string(num_nodes));

  std::vector<NodePair> canonical;
  canonical.reserve(edges.size());
  for (auto [u, v] : edges) {
    require(u >= 0 && u < num_nodes && v >= 0 && v < num_nodes, ErrorCode::IndexOutOfRange,
            "edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    require(u != v, ErrorCode::SelfLoop, "edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    canonical.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canonical.begin(), canonical.end());
  const auto dup = std::adjacent_find(canonical.begin(), canonical.end());
  require(dup == canonical.end(), ErrorCode::DuplicateEdge,
          dup == canonical.end() ? "" : "edge (" + std::to_string(dup->first) + "," + std::to_string(dup->second) + ")");

  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(canonical.size() * 2);
  for (auto [u, v] : canonical) {
    triplets.emplace_back(u, v, 1.0);
    triplets.emplace_back(v, u, 1.0);
  }
  Graph g;
  g.name = std::move(name);
  g.num_nodes = num_nodes;
  g.adjacency.resize(num_nodes, num_nodes);
  g.adjacency.setFromTriplets(triplets.begin(), triplets.end());
  g.adjacency.makeCompressed();
  g.features = std::move(features);
  g.labels = std::move(labels);
  g.splits = std::move(splits);
  if (num_classes < 0) {
    num_classes = 0;
    for (int l : g.labels) num_classes = std::max(num_classes, l + 1);
  }
  g.num_classes = num_classes;
  validate(g);
  return g;
}

void validate(const Graph& g) {
  require(g.adjacency.rows() == g.num_nodes && g.adjacency.cols() == g.num_nodes, ErrorCode::ShapeMismatch,
          "adjacency shape does not match num_nodes");
  require(g.features.rows() == g.num_nodes, ErrorCode::ShapeMismatch, "feature rows != num_nodes");
  for (int u = 0; u < g.adjacency.outerSize(); ++u) {
    int previous = -1;
    for (SparseMatrix::InnerIterator it(g.adjacency, u); it; ++it) {
      const int v = it.col();
      require(v != u, ErrorCode::SelfLoop, "node " + std::to_string(u));
      require(v != previous, ErrorCode::DuplicateEdge, "edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
      require(it.value() == 1.0, ErrorCode::InvalidArgument, "adjacency entries must be 1");
      require(g.adjacency.coeff(v, u) == 1.0, ErrorCode::InvalidArgument,
              "adjacency not symmetric at (" + std::to_string(u) + "," + std::to_string(v) + ")");
      previous = v;
    }
  }
  require_finite(g.features, "features");
  for (std::size_t i = 0; i < g.labels.size(); ++i) {
    const int l = g.labels[i];
    require(l >= -1 && (l < g.num_classes || g.num_classes == 0), ErrorCode::IndexOutOfRange,
            "label " + std::to_string(l) + " at node " + std::to_string(i));
  }
  validate_splits(g.splits, g.num_nodes);
}

SparseMatrix row_normalize(const SparseMatrix& matrix) {
  SparseMatrix out = matrix;
  for (int r = 0; r < out.outerSize(); ++r) {
    double total = 0.0;
    for (SparseMatrix::InnerIterator it(out, r); it; ++it) total += it.value();
    if (total == 0.0) continue;
    for (SparseMatrix::InnerIterator it(out, r); it; ++it) it.valueRef() /= total;
  }
  return out;
}

SparseMatrix two_hop_normalized(const SparseMatrix& adjacency) {
  SparseMatrix squared = (adjacency * adjacency).pruned();
  squared.makeCompressed();
  return row_normalize(squared);
}

ConvBases compute_conv_bases(const Graph& graph) {
  validate(graph);
  const SparseMatrix one_hop = row_normalize(graph.adjacency);
  const SparseMatrix two_hop = two_hop_normalized(graph.adjacency);
  ConvBases bases;
  bases.b0 = graph.features;
  bases.b1 = one_hop * graph.features;
  bases.b2 = two_hop * graph.features;
  require_finite(bases.b1, "one-hop basis");
  require_finite(bases.b2, "two-hop basis");
  return bases;
}

double edge_homophily(const Graph& graph, std::span<const int> labels) {
  require(static_cast<int>(labels.size()) == graph.num_nodes, ErrorCode::LengthMismatch,
          "label count " + std::to_string(labels.size()) + " != num_nodes " + std::to_string(graph.num_nodes));
  const auto edge_list = graph.edges();
  require(!edge_list.empty(), ErrorCode::EmptyEdgeSet, "graph has no edges");
  std::size_t same = 0;
  for (auto [u, v] : edge_list) {
    require(labels[static_cast<std::size_t>(u)] >= 0 && labels[static_cast<std::size_t>(v)] >= 0,
            ErrorCode::UnlabeledEndpoint, "edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    if (labels[static_cast<std::size_t>(u)] == labels[static_cast<std::size_t>(v)]) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(edge_list.size());
}

double edge_homophily(const Graph& graph) {
  require(graph.has_labels(), ErrorCode::UnlabeledEndpoint, "graph '" + graph.name + "' has no labels");
  return edge_homophily(graph, graph.labels);
}

std::vector<Split> stratified_splits(std::span<const int> labels, int count, double train_frac, double val_frac,
                                     std::uint64_t seed) {
  require(train_frac > 0.0 && val_frac >= 0.0 && train_frac + val_frac < 1.0, ErrorCode::InvalidArgument,
          "split fractions must satisfy 0 < train, 0 <= val, train + val < 1");
  int classes = 0;
  for (int l : labels) classes = std::max(classes, l + 1);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) members[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));
  }
  std::vector<Split> out;
  for (int s = 0; s < count; ++s) {
    Rng rng(derive_seed(seed, "split", static_cast<std::uint64_t>(s)));
    Split split;
    for (auto group : members) {
      rng.shuffle(std::span<int>(group));
      const auto n = group.size();
      const auto n_train = static_cast<std::size_t>(static_cast<double>(n) * train_frac + 0.5);
      const auto n_val = static_cast<std::size_t>(static_cast<double>(n) * val_frac + 0.5);
      for (std::size_t k = 0; k < n; ++k) {
        auto& part = k < n_train ? split.train : (k < n_train + n_val ? split.val : split.test);
        part.push_back(group[k]);
      }
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.val.begin(), split.val.end());
    std::sort(split.test.begin(), split.test.end());
    out.push_back(std::move(split));
  }
  return out;
}

}  // namespace fuel
