#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fuel/graph.hpp"
#include "fuel/matrix.hpp"

namespace fuel {

enum class ProbeKind { Linear, Mlp };

std::string to_string(ProbeKind kind);
ProbeKind probe_kind_from_string(const std::string& text);

struct ProbeConfig {
  int hidden = 64;
  double weight_decay = 5e-4;
  double lr = 0.01;
  int epochs = 500;
  int patience = 50;  // on validation accuracy; ignored when the split has no validation nodes
  std::uint64_t seed = 0;
};

struct ProbeReport {
  ProbeKind kind = ProbeKind::Mlp;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
  int best_epoch = 0;
  int epochs_run = 0;
  std::vector<double> loss_trace;
};

// Classifier on frozen embeddings: softmax(x W^T + b) for Linear, or a single ReLU
// hidden layer for Mlp. Parameters live in one flat vector for the optimizer.
class ProbeModel {
 public:
  ProbeModel(ProbeKind kind, int input_dim, int hidden, int classes);

  void initialize(std::uint64_t seed);

  // Mean cross-entropy over rows plus 0.5 * weight_decay * ||weights||^2.
  double loss(const Matrix& x, std::span<const int> labels, double weight_decay, std::vector<double>* grad) const;
  Labels predict(const Matrix& x) const;

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  ProbeKind kind() const { return kind_; }

 private:
  Matrix logits(const Matrix& x, Matrix* hidden_act) const;

  ProbeKind kind_;
  int input_dim_;
  int hidden_;
  int classes_;
  std::vector<double> params_;
};

double accuracy(std::span<const int> predicted, std::span<const int> truth);

ProbeReport mlp_probe(const Matrix& z, std::span<const int> labels, const Split& split, const ProbeConfig& config);
ProbeReport linear_probe(const Matrix& z, std::span<const int> labels, const Split& split, const ProbeConfig& config);
ProbeReport run_probe(ProbeKind kind, const Matrix& z, std::span<const int> labels, const Split& split,
                      const ProbeConfig& config);

}  // namespace fuel
