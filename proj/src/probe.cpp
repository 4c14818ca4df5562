#include "fuel/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuel/error.hpp"
#include "fuel/optim.hpp"
#include "fuel/rng.hpp"

namespace fuel {

std::string to_string(ProbeKind kind) { return kind == ProbeKind::Linear ? "linear" : "mlp"; }

ProbeKind probe_kind_from_string(const std::string& text) {
  if (text == "linear") return ProbeKind::Linear;
  if (text == "mlp") return ProbeKind::Mlp;
  fail(ErrorCode::InvalidArgument, "probe kind must be 'linear' or 'mlp', got '" + text + "'");
}

// Flat layout. Linear: W (C x d), b (C). Mlp: W1 (h x d), b1 (h), W2 (C x h), b2 (C).
ProbeModel::ProbeModel(ProbeKind kind, int input_dim, int hidden, int classes)
    : kind_(kind), input_dim_(input_dim), hidden_(hidden), classes_(classes) {
  require(input_dim >= 1 && classes >= 2, ErrorCode::InvalidArgument, "probe: need d >= 1 and >= 2 classes");
  require(kind == ProbeKind::Linear || hidden >= 1, ErrorCode::InvalidArgument, "probe: hidden width must be >= 1");
  const std::size_t count = kind == ProbeKind::Linear
                                ? static_cast<std::size_t>(classes * input_dim + classes)
                                : static_cast<std::size_t>(hidden * input_dim + hidden + classes * hidden + classes);
  params_.assign(count, 0.0);
}

void ProbeModel::initialize(std::uint64_t seed) {
  Rng rng(seed);
  // PyTorch-style uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  auto fill = [&](std::size_t offset, std::size_t count, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i) params_[offset + i] = (2.0 * rng.uniform() - 1.0) * bound;
  };
  if (kind_ == ProbeKind::Linear) {
    fill(0, params_.size(), input_dim_);
  } else {
    const auto first = static_cast<std::size_t>(hidden_ * input_dim_ + hidden_);
    fill(0, first, input_dim_);
    fill(first, params_.size() - first, hidden_);
  }
}

namespace {

using ConstMap = Eigen::Map<const Matrix>;
using ConstVecMap = Eigen::Map<const Vector>;
using MutMap = Eigen::Map<Matrix>;
using MutVecMap = Eigen::Map<Vector>;

}  // namespace

Matrix ProbeModel::logits(const Matrix& x, Matrix* hidden_act) const {
  require(x.cols() == input_dim_, ErrorCode::ShapeMismatch, "probe: input width mismatch");
  const double* p = params_.data();
  if (kind_ == ProbeKind::Linear) {
    ConstMap w(p, classes_, input_dim_);
    ConstVecMap b(p + classes_ * input_dim_, classes_);
    Matrix out = x * w.transpose();
    out.rowwise() += b.transpose();
    return out;
  }
  ConstMap w1(p, hidden_, input_dim_);
  ConstVecMap b1(p + hidden_ * input_dim_, hidden_);
  ConstMap w2(p + hidden_ * input_dim_ + hidden_, classes_, hidden_);
  ConstVecMap b2(p + hidden_ * input_dim_ + hidden_ + classes_ * hidden_, classes_);
  Matrix act = x * w1.transpose();
  act.rowwise() += b1.transpose();
  act = act.cwiseMax(0.0);
  Matrix out = act * w2.transpose();
  out.rowwise() += b2.transpose();
  if (hidden_act) *hidden_act = std::move(act);
  return out;
}

double ProbeModel::loss(const Matrix& x, std::span<const int> labels, double weight_decay,
                        std::vector<double>* grad) const {
  require(static_cast<Eigen::Index>(labels.size()) == x.rows() && x.rows() > 0, ErrorCode::LengthMismatch,
          "probe: label count != rows");
  Matrix act;
  Matrix scores = logits(x, &act);
  const auto n = static_cast<double>(x.rows());
  double total = 0.0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    require(y >= 0 && y < classes_, ErrorCode::IndexOutOfRange, "probe: label out of range");
    auto row = scores.row(i);
    const double top = row.maxCoeff();
    row = (row.array() - top).exp();
    const double z = row.sum();
    total += std::log(z) - std::log(row(y));
    row /= z;
    row(y) -= 1.0;  // row now holds dLoss_i/dlogits
  }
  total /= n;

  const double* p = params_.data();
  const std::size_t weight_end_1 = kind_ == ProbeKind::Linear ? static_cast<std::size_t>(classes_ * input_dim_)
                                                               : static_cast<std::size_t>(hidden_ * input_dim_);
  double penalty = 0.0;
  for (std::size_t i = 0; i < weight_end_1; ++i) penalty += p[i] * p[i];
  std::size_t w2_offset = 0;
  if (kind_ == ProbeKind::Mlp) {
    w2_offset = static_cast<std::size_t>(hidden_ * input_dim_ + hidden_);
    for (std::size_t i = 0; i < static_cast<std::size_t>(classes_ * hidden_); ++i) {
      penalty += p[w2_offset + i] * p[w2_offset + i];
    }
  }
  total += 0.5 * weight_decay * penalty;
  if (grad == nullptr) return total;

  grad->assign(params_.size(), 0.0);
  double* g = grad->data();
  const Matrix dscores = scores / n;
  if (kind_ == ProbeKind::Linear) {
    MutMap gw(g, classes_, input_dim_);
    MutVecMap gb(g + classes_ * input_dim_, classes_);
    gw = dscores.transpose() * x;
    gb = dscores.colwise().sum().transpose();
  } else {
    ConstMap w2(p + w2_offset, classes_, hidden_);
    MutMap gw1(g, hidden_, input_dim_);
    MutVecMap gb1(g + hidden_ * input_dim_, hidden_);
    MutMap gw2(g + w2_offset, classes_, hidden_);
    MutVecMap gb2(g + w2_offset + classes_ * hidden_, classes_);
    gw2 = dscores.transpose() * act;
    gb2 = dscores.colwise().sum().transpose();
    Matrix dact = dscores * w2;
    dact.array() *= (act.array() > 0.0).cast<double>();
    gw1 = dact.transpose() * x;
    gb1 = dact.colwise().sum().transpose();
  }
  for (std::size_t i = 0; i < weight_end_1; ++i) g[i] += weight_decay * p[i];
  if (kind_ == ProbeKind::Mlp) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(classes_ * hidden_); ++i) {
      g[w2_offset + i] += weight_decay * p[w2_offset + i];
    }
  }
  return total;
}

Labels ProbeModel::predict(const Matrix& x) const {
  const Matrix scores = logits(x, nullptr);
  Labels out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    scores.row(i).maxCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  require(predicted.size() == truth.size(), ErrorCode::LengthMismatch, "accuracy: length mismatch");
  if (truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

ProbeReport run_probe(ProbeKind kind, const Matrix& z, std::span<const int> labels, const Split& split,
                      const ProbeConfig& config) {
  require(static_cast<Eigen::Index>(labels.size()) == z.rows(), ErrorCode::ShapeMismatch,
          "probe: label count " + std::to_string(labels.size()) + " != embedding rows " + std::to_string(z.rows()));
  require(!split.train.empty(), ErrorCode::EmptySplit, "probe: train split is empty");
  require(!split.test.empty(), ErrorCode::EmptySplit, "probe: test split is empty");
  int classes = 0;
  for (int l : labels) classes = std::max(classes, l + 1);
  classes = std::max(classes, 2);

  const auto subset = [&](const std::vector<int>& idx) {
    Labels out;
    out.reserve(idx.size());
    for (int i : idx) {
      require(i >= 0 && i < static_cast<int>(labels.size()), ErrorCode::IndexOutOfRange, "probe: split index");
      require(labels[static_cast<std::size_t>(i)] >= 0, ErrorCode::UnlabeledEndpoint,
              "probe: split contains unlabeled node " + std::to_string(i));
      out.push_back(labels[static_cast<std::size_t>(i)]);
    }
    return out;
  };
  const Matrix x_train = gather_rows(z, split.train);
  const Matrix x_val = gather_rows(z, split.val);
  const Matrix x_test = gather_rows(z, split.test);
  const Labels y_train = subset(split.train);
  const Labels y_val = subset(split.val);
  const Labels y_test = subset(split.test);

  ProbeModel model(kind, static_cast<int>(z.cols()), config.hidden, classes);
  model.initialize(derive_seed(config.seed, "probe/init"));
  // Coupled L2 on every parameter, as in the usual torch.optim.Adam(weight_decay=...) probe.
  Adam opt({.learning_rate = config.lr, .weight_decay = config.weight_decay});

  ProbeReport report;
  report.kind = kind;
  const bool early_stop = !split.val.empty();
  std::vector<double> best_params = model.params();
  double best_val = -1.0;
  double best_val_loss = std::numeric_limits<double>::infinity();
  int since_best = 0;
  std::vector<double> grad;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double loss = model.loss(x_train, y_train, 0.0, &grad);
    report.loss_trace.push_back(loss);
    opt.step(model.params(), grad);
    report.epochs_run = epoch + 1;
    if (!early_stop) continue;
    const double val = accuracy(model.predict(x_val), y_val);
    // Accuracy plateaus early on easy splits; equal accuracy with lower validation loss still counts.
    const double val_loss = model.loss(x_val, y_val, 0.0, nullptr);
    if (val > best_val || (val == best_val && val_loss < best_val_loss)) {
      best_val = val;
      best_val_loss = val_loss;
      best_params = model.params();
      report.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  if (early_stop) {
    model.params() = best_params;
  } else {
    report.best_epoch = report.epochs_run - 1;
  }
  report.train_accuracy = accuracy(model.predict(x_train), y_train);
  report.val_accuracy = early_stop ? accuracy(model.predict(x_val), y_val) : 0.0;
  report.test_accuracy = accuracy(model.predict(x_test), y_test);
  return report;
}

ProbeReport mlp_probe(const Matrix& z, std::span<const int> labels, const Split& split, const ProbeConfig& config) {
  return run_probe(ProbeKind::Mlp, z, labels, split, config);
}

ProbeReport linear_probe(const Matrix& z, std::span<const int> labels, const Split& split, const ProbeConfig& config) {
  return run_probe(ProbeKind::Linear, z, labels, split, config);
}

}  // namespace fuel
