#include <cmath>
#include <cstring>

#include "fuel/optim.hpp"
#include "fuel/pair_loss.hpp"
#include "fuel/refine.hpp"
#include "helpers.hpp"

using namespace fuel;
using testutil::column;

namespace {

RefinerParams random_params(int d, int hidden, Rng& rng) {
  RefinerParams p = RefinerParams::initialize(d, hidden, rng);
  for (double& v : p.w2.reshaped()) v = 0.5 * rng.normal();
  for (double& v : p.b1) v = 0.3 * rng.normal();
  for (double& v : p.b2) v = 0.3 * rng.normal();
  return p;
}

// Independent forward pass: explicit loops instead of matrix expressions.
Matrix forward_oracle(const Matrix& h, const RefinerParams& p) {
  Matrix out(h.rows(), h.cols());
  for (int i = 0; i < h.rows(); ++i) {
    std::vector<double> act(static_cast<std::size_t>(p.hidden()));
    for (int k = 0; k < p.hidden(); ++k) {
      double s = p.b1(k);
      for (int j = 0; j < h.cols(); ++j) s += p.w1(k, j) * h(i, j);
      act[k] = std::tanh(s);
    }
    for (int j = 0; j < h.cols(); ++j) {
      double s = p.b2(j);
      for (int k = 0; k < p.hidden(); ++k) s += p.w2(j, k) * act[k];
      out(i, j) = s;
    }
  }
  return out;
}

double pair_loss_oracle(const Matrix& z, const std::vector<NodePair>& pos, const std::vector<NodePair>& neg, double tau) {
  double a = 0, b = 0;
  for (auto [i, j] : pos) a += (z.row(i) - z.row(j)).norm();
  for (auto [i, j] : neg) b += (z.row(i) - z.row(j)).norm();
  return std::exp(a / (tau * pos.size()) - b / (tau * neg.size()));
}

std::vector<NodePair> complement(int n, const std::vector<NodePair>& pos) {
  std::vector<NodePair> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::find(pos.begin(), pos.end(), NodePair{i, j}) == pos.end()) out.emplace_back(i, j);
  return out;
}

}  // namespace

TEST_SUITE("refine") {
  TEST_CASE("knn_pairs") {
    const auto p = knn_pairs(column({0, 0.1, 5}), 1);
    CHECK(p.positives == std::vector<NodePair>{{0, 1}, {1, 2}});
    CHECK(p.neighbors[2] == std::vector<int>{1});
    CHECK(p.contains(2, 1));
    CHECK_FALSE(p.contains(0, 2));

    const auto all = knn_pairs(column({0, 1, 3, 7}), 10);
    CHECK(all.neighbors_per_node == 3);
    CHECK(all.positives.size() == 6);

    const auto dup = knn_pairs(column({1, 1, 1, 1}), 2);
    CHECK(dup.neighbors[0] == std::vector<int>{1, 2});
    CHECK(dup.neighbors[3] == std::vector<int>{0, 1});
  }

  TEST_CASE("knn_pairs matches exhaustive comparison and is pure") {
    Rng rng(1);
    const Matrix h = testutil::random_matrix(30, 3, rng);
    const auto p = knn_pairs(h, 4);
    CHECK(p.positives == knn_pairs(h, 4).positives);
    for (int i = 0; i < 30; ++i) {
      REQUIRE(p.neighbors[i].size() == 4);
      const double kth = (h.row(i) - h.row(p.neighbors[i].back())).norm();
      int closer = 0;
      for (int j = 0; j < 30; ++j)
        if (j != i && (h.row(i) - h.row(j)).norm() < kth) ++closer;
      CHECK(closer == 3);
      for (int j : p.neighbors[i]) CHECK(j != i);
    }
    for (std::size_t k = 1; k < p.positives.size(); ++k) CHECK(p.positives[k - 1] < p.positives[k]);
  }

  TEST_CASE("sample_negatives") {
    const auto p = knn_pairs(column({0, 0.1, 5}), 1);
    Rng rng(2);
    CHECK(sample_negatives(p, 1, rng) == std::vector<NodePair>{{0, 2}});
    const auto full = knn_pairs(column({0, 1, 2}), 2);
    CHECK_THROWS_CODE(sample_negatives(full, 1, rng), ErrorCode::ComplementEmpty);

    Rng big(3);
    const Matrix h = testutil::random_matrix(40, 2, big);
    const auto kp = knn_pairs(h, 3);
    Rng a(9), b(9);
    const auto sa = sample_negatives(kp, 300, a);
    CHECK(sa == sample_negatives(kp, 300, b));
    for (auto [i, j] : sa) {
      CHECK(i < j);
      CHECK_FALSE(kp.contains(i, j));
    }
  }

  TEST_CASE("refine_forward") {
    Rng rng(4);
    const Matrix h = testutil::random_matrix(10, 3, rng);
    RefinerParams zero = RefinerParams::initialize(3, 5, rng);
    zero.w1.setZero();
    zero.b1.setZero();
    CHECK(refine_forward(h, zero) == h);

    const RefinerParams p = random_params(3, 5, rng);
    const Matrix zh = refine_forward(Matrix::Zero(4, 3), p);
    const Matrix bias_only = forward_oracle(Matrix::Zero(4, 3), p);
    CHECK((zh - bias_only).cwiseAbs().maxCoeff() < 1e-14);

    for (int t = 0; t < 10; ++t) {
      const RefinerParams q = random_params(3, 4, rng);
      const Matrix hr = testutil::random_matrix(7, 3, rng);
      CHECK(((refine_forward(hr, q) - hr) - forward_oracle(hr, q)).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_CODE(refine_forward(Matrix(2, 4), p), ErrorCode::ShapeMismatch);
  }

  TEST_CASE("initial refiner output equals H bitwise") {
    Rng rng(5);
    const Matrix h = testutil::random_matrix(25, 6, rng, 3.0);
    const RefinerParams p = RefinerParams::initialize(6, 6, rng);
    CHECK(p.w2.isZero(0.0));
    CHECK(p.b2.isZero(0.0));
    CHECK_FALSE(p.w1.isZero(0.0));
    CHECK(std::memcmp(refine_forward(h, p).data(), h.data(), sizeof(double) * h.size()) == 0);
  }

  TEST_CASE("flatten and unflatten round-trip") {
    Rng rng(6);
    const RefinerParams p = random_params(4, 3, rng);
    const auto flat = p.flatten();
    CHECK(flat.size() == p.parameter_count());
    CHECK(p.parameter_count() == 4 * 3 + 3 + 3 * 4 + 4);
    RefinerParams q = RefinerParams::initialize(4, 3, rng);
    q.unflatten(flat);
    CHECK(q.w1 == p.w1);
    CHECK(q.w2 == p.w2);
    CHECK(q.b1 == p.b1);
    CHECK(q.b2 == p.b2);
  }

  TEST_CASE("loss_refine") {
    const Matrix z = column({0, 1, 10, 11});
    const std::vector<NodePair> pos{{0, 1}, {2, 3}}, neg{{0, 2}, {0, 3}, {1, 2}, {1, 3}};
    CHECK(loss_refine(z, pos, neg, 1.0) == doctest::Approx(std::exp(-9.0)).epsilon(1e-12));
    CHECK(pair_loss_oracle(z, pos, neg, 1.0) == doctest::Approx(1.234e-4).epsilon(1e-3));
    CHECK(loss_refine_complement(z, pos, 1.0) == doctest::Approx(std::exp(-9.0)).epsilon(1e-12));

    const Matrix eq = column({0, 1, 5, 6});
    CHECK(loss_refine(eq, std::vector<NodePair>{{0, 1}}, std::vector<NodePair>{{2, 3}}, 1.0) == 1.0);
    CHECK(loss_refine(z, pos, neg, 1e12) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_CODE(loss_refine(z, std::vector<NodePair>{}, neg, 1.0), ErrorCode::EmptyPairSet);
    CHECK_THROWS_CODE(loss_refine(z, pos, std::vector<NodePair>{}, 1.0), ErrorCode::EmptyPairSet);

    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
      const Matrix r = testutil::random_matrix(9, 2, rng);
      const auto kp = knn_pairs(r, 2);
      const double v = loss_refine_complement(r, kp.positives, 0.7);
      CHECK(v > 0.0);
      CHECK(v == doctest::Approx(pair_loss_oracle(r, kp.positives, complement(9, kp.positives), 0.7)).epsilon(1e-12));
    }
  }

  TEST_CASE("pair-loss gradients w.r.t. the embedding pass finite differences") {
    Rng rng(8);
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
      const int n = 6, d = 3;
      const Matrix x0 = testutil::random_matrix(n, d, rng);
      const auto kp = knn_pairs(x0, 2);
      const auto neg = complement(n, kp.positives);
      for (int mode = 0; mode < 2; ++mode) {
        Objective f = [&](std::span<const double> x, std::span<double> grad) {
          const Matrix m = Eigen::Map<const Matrix>(x.data(), n, d);
          Matrix g;
          const auto v = mode == 0 ? exp_pair_loss_complement(m, kp.positives, 0.8, grad.empty() ? nullptr : &g)
                                   : exp_pair_loss_lists(m, kp.positives, neg, 0.8, grad.empty() ? nullptr : &g);
          if (!grad.empty()) std::copy(g.data(), g.data() + g.size(), grad.begin());
          return v.loss;
        };
        worst = std::max(worst, finite_diff_check(f, as_span(x0)));
      }
    }
    CHECK(worst < 1e-4);
  }

  TEST_CASE("refiner parameter gradient passes finite differences on 20 six-node instances") {
    Rng rng(9);
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
      const Matrix h = testutil::random_matrix(6, 3, rng);
      const auto kp = knn_pairs(h, 2);
      RefinerParams p = random_params(3, 4, rng);
      const std::vector<NodePair> sampled{{0, 5}, {1, 4}, {2, 3}, {0, 3}};
      for (int mode = 0; mode < 2; ++mode) {
        const std::span<const NodePair> neg = mode == 0 ? std::span<const NodePair>() : std::span<const NodePair>(sampled);
        if (mode == 1 && std::any_of(sampled.begin(), sampled.end(), [&](NodePair q) { return kp.contains(q.first, q.second); }))
          continue;
        Objective f = [&](std::span<const double> x, std::span<double> grad) {
          RefinerParams q = p;
          q.unflatten(x);
          std::vector<double> g;
          const double v = refine_objective(h, q, kp.positives, neg, 1.3, grad.empty() ? nullptr : &g);
          if (!grad.empty()) std::copy(g.begin(), g.end(), grad.begin());
          return v;
        };
        worst = std::max(worst, finite_diff_check(f, p.flatten()));
      }
    }
    CHECK(worst < 1e-4);
  }

  TEST_CASE("train_step2 with zero learning rate keeps the initial forward pass") {
    Rng rng(10);
    const Matrix h = testutil::random_matrix(20, 3, rng);
    const auto r = train_step2(h, {.knn = 3, .epochs = 15, .lr = 0.0, .seed = 2});
    CHECK(r.z == h);
    CHECK(r.trace.size() == 15);
    for (double v : r.trace) CHECK(v == r.trace.front());
  }

  TEST_CASE("train_step2 loss decreases after warmup on random 50-node input") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      CAPTURE(seed);
      Rng rng(seed);
      const Matrix h = testutil::random_matrix(50, 4, rng);
      const auto r = train_step2(h, {.knn = 5, .epochs = 200, .seed = seed});
      int increases = 0;
      for (std::size_t t = 11; t < r.trace.size(); ++t)
        if (r.trace[t] > r.trace[t - 1] + 1e-12) ++increases;
      CHECK(increases == 0);
      CHECK(r.trace.back() < r.trace.front());
    }
  }

  TEST_CASE("train_step2 is deterministic and samples negatives above the threshold") {
    Rng rng(11);
    const Matrix h = testutil::random_matrix(40, 3, rng);
    const Step2Config cfg{.knn = 4, .epochs = 20, .neg_sample = 200, .pair_exact_threshold = 10, .seed = 3};
    const auto a = train_step2(h, cfg);
    CHECK_FALSE(a.exact_negatives);
    CHECK(a.resolved_neg_sample == 200);
    CHECK(a.z == train_step2(h, cfg).z);
    CHECK(a.resolved_hidden == 3);
    CHECK(train_step2(h, {.knn = 4, .epochs = 1}).exact_negatives);
  }

  TEST_CASE("train_step2 pushes two blobs apart") {
    Rng rng(12);
    Matrix h = testutil::random_matrix(60, 2, rng);
    for (int i = 30; i < 60; ++i) h(i, 0) += 3.0;
    const auto r = train_step2(h, {.knn = 5, .epochs = 200, .lr = 0.01, .seed = 1});
    double before = 0, after = 0;
    for (int i = 0; i < 30; ++i)
      for (int j = 30; j < 60; ++j) {
        before += (h.row(i) - h.row(j)).norm();
        after += (r.z.row(i) - r.z.row(j)).norm();
      }
    CHECK(r.trace.back() < r.trace.front());
    CHECK(after > before);
  }
}
