#include <cmath>
#include <limits>
#include <numeric>

#include "fuel/cluster_metrics.hpp"
#include "fuel/optim.hpp"
#include "fuel/probe.hpp"
#include "helpers.hpp"

using namespace fuel;
using testutil::column;

namespace {

// Exhaustive oracle: smallest within-cluster sum of squares over every labeling into k groups.
double best_inertia_oracle(const Matrix& x, int k) {
  const int n = static_cast<int>(x.rows());
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double inertia = 0;
    bool all_used = true;
    for (int c = 0; c < k; ++c) {
      Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(x.cols());
      int count = 0;
      for (int i = 0; i < n; ++i)
        if (a[i] == c) {
          centroid += x.row(i);
          ++count;
        }
      if (count == 0) {
        all_used = false;
        break;
      }
      centroid /= count;
      for (int i = 0; i < n; ++i)
        if (a[i] == c) inertia += (x.row(i) - centroid).squaredNorm();
    }
    if (all_used) best = std::min(best, inertia);
    int pos = 0;
    while (pos < n && ++a[pos] == k) a[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

Split make_split(int n, double train, double val) {
  Split s;
  for (int i = 0; i < n; ++i) {
    const double f = (i % 100) / 100.0;
    (f < train ? s.train : f < train + val ? s.val : s.test).push_back(i);
  }
  return s;
}

}  // namespace

TEST_SUITE("evalkit") {
  TEST_CASE("calinski_harabasz") {
    const auto ch = calinski_harabasz(column({0, 2, 4, 6}), Labels{0, 0, 1, 1});
    CHECK(ch.score == doctest::Approx(8.0));
    CHECK_FALSE(ch.zero_within_variance);

    const auto flat = calinski_harabasz(column({1, 1, 5, 5}), Labels{0, 0, 1, 1});
    CHECK(flat.zero_within_variance);
    CHECK(std::isinf(flat.score));

    CHECK_THROWS_CODE(calinski_harabasz(column({0, 1, 2}), Labels{0, 0, 0}), ErrorCode::DegenerateLabels);
    CHECK_THROWS_CODE(calinski_harabasz(column({0, 1}), Labels{0, 1}), ErrorCode::DegenerateLabels);
    CHECK(calinski_harabasz(column({0, 2, 4, 6, 100}), Labels{0, 0, 1, 1, -1}).score == doctest::Approx(8.0));
  }

  TEST_CASE("calinski_harabasz of random labels on isotropic noise is near one") {
    Rng rng(1);
    const Matrix z = testutil::random_matrix(1000, 5, rng);
    Labels labels(1000);
    for (int& l : labels) l = static_cast<int>(rng.below(4));
    const double s = calinski_harabasz(z, labels).score;
    CHECK(s > 0.2);
    CHECK(s < 5.0);
  }

  TEST_CASE("calinski_harabasz is invariant to translation and isotropic scaling") {
    Rng rng(2);
    const Matrix z = testutil::random_matrix(50, 3, rng);
    Labels labels(50);
    for (int i = 0; i < 50; ++i) labels[i] = i % 3;
    const double base = calinski_harabasz(z, labels).score;
    Matrix moved = z;
    moved.rowwise() += Eigen::RowVector3d(5, -2, 7);
    CHECK(calinski_harabasz(moved, labels).score == doctest::Approx(base).epsilon(1e-10));
    CHECK(calinski_harabasz(3.5 * z, labels).score == doctest::Approx(base).epsilon(1e-10));
  }

  TEST_CASE("kmeans finds the obvious partition") {
    const auto r = kmeans(column({0, 0.1, 10, 10.1}), 2, 1);
    CHECK(r.assignment[0] == r.assignment[1]);
    CHECK(r.assignment[2] == r.assignment[3]);
    CHECK(r.assignment[0] != r.assignment[2]);
    CHECK(r.inertia == doctest::Approx(best_inertia_oracle(column({0, 0.1, 10, 10.1}), 2)));
    CHECK(r.inertia == doctest::Approx(0.01));
  }

  TEST_CASE("kmeans never beats the exhaustive optimum and reaches it with enough restarts") {
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
      Matrix x = testutil::random_matrix(8, 2, rng);
      for (int i = 0; i < 4; ++i) x(i, 0) += 4.0;
      const double optimum = best_inertia_oracle(x, 2);
      // Lloyd can stop in a local minimum, so a few restarts may miss the optimum but never beat it.
      CHECK(kmeans(x, 2, static_cast<std::uint64_t>(t)).inertia >= optimum - 1e-9);
      CHECK(kmeans(x, 2, static_cast<std::uint64_t>(t), {.restarts = 500}).inertia == doctest::Approx(optimum).epsilon(1e-9));
    }
  }

  TEST_CASE("kmeans edge cases") {
    Rng rng(4);
    const Matrix x = testutil::random_matrix(6, 2, rng);
    CHECK(kmeans(x, 6, 1).inertia == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_CODE(kmeans(Matrix(0, 2), 2, 1), ErrorCode::EmptyInput);
    CHECK_THROWS(kmeans(x, 7, 1));

    Matrix dup(8, 1);
    dup << 1, 1, 1, 1, 5, 5, 5, 5;
    const auto a = kmeans(dup, 3, 9), b = kmeans(dup, 3, 9);
    CHECK(a.assignment == b.assignment);
    CHECK(a.inertia == 0.0);
  }

  TEST_CASE("kmeans inertia never increases across Lloyd iterations") {
    Rng rng(5);
    const Matrix x = testutil::random_matrix(300, 4, rng);
    const auto r = kmeans(x, 6, 2, {.restarts = 3});
    REQUIRE(r.inertia_trace.size() >= 2);
    for (std::size_t t = 1; t < r.inertia_trace.size(); ++t) CHECK(r.inertia_trace[t] <= r.inertia_trace[t - 1]);
    CHECK(r.iterations <= 300);
    for (int l : r.assignment) CHECK((l >= 0 && l < 6));
  }

  TEST_CASE("nmi") {
    CHECK(nmi(Labels{0, 0, 1, 1}, Labels{1, 1, 0, 0}) == doctest::Approx(1.0));
    CHECK(nmi(Labels{0, 0, 1, 1}, Labels{0, 0, 0, 0}) == 0.0);
    CHECK(nmi(Labels{0, 0, 1, 1}, Labels{0, 1, 0, 1}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(nmi(Labels{3, 3, 3}, Labels{3, 3, 3}) == 1.0);
    CHECK(nmi(Labels{2, 0, 1, 1, 0}, Labels{2, 0, 1, 1, 0}) == doctest::Approx(1.0));
    CHECK_THROWS_CODE(nmi(Labels{0, 1}, Labels{0}), ErrorCode::LengthMismatch);
    // Hand-computed: contingency [[2,0],[1,1]] gives I = 0.2158, H(a) = ln 2, H(b) = 0.5623.
    const double h_a = std::log(2.0);
    const double h_b = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
    const double mi = 0.5 * std::log(0.5 / (0.5 * 0.75)) + 0.25 * std::log(0.25 / (0.5 * 0.75)) +
                      0.25 * std::log(0.25 / (0.5 * 0.25));
    CHECK(nmi(Labels{0, 0, 1, 1}, Labels{0, 0, 0, 1}) == doctest::Approx(2 * mi / (h_a + h_b)).epsilon(1e-12));
  }

  TEST_CASE("ari") {
    CHECK(ari(Labels{0, 1, 1, 2}, Labels{0, 1, 1, 2}) == doctest::Approx(1.0));
    CHECK(ari(Labels{0, 0, 1, 1}, Labels{0, 1, 0, 1}) == doctest::Approx(-0.5));
    CHECK(ari(Labels{0, 0, 0, 0}, Labels{0, 1, 0, 1}) == doctest::Approx(0.0));
    CHECK_THROWS_CODE(ari(Labels{0, 1}, Labels{0}), ErrorCode::LengthMismatch);
  }

  TEST_CASE("nmi and ari are symmetric and relabeling invariant") {
    Rng rng(6);
    for (int t = 0; t < 30; ++t) {
      Labels a(40), b(40), pa(40);
      const std::vector<int> perm{3, 1, 0, 2};
      for (int i = 0; i < 40; ++i) {
        a[i] = static_cast<int>(rng.below(4));
        b[i] = rng.uniform() < 0.6 ? a[i] : static_cast<int>(rng.below(3));
        pa[i] = perm[a[i]];
      }
      CHECK(nmi(a, b) == doctest::Approx(nmi(b, a)).epsilon(1e-12));
      CHECK(ari(a, b) == doctest::Approx(ari(b, a)).epsilon(1e-12));
      CHECK(nmi(pa, b) == doctest::Approx(nmi(a, b)).epsilon(1e-12));
      CHECK(ari(pa, b) == doctest::Approx(ari(a, b)).epsilon(1e-12));
      CHECK((nmi(a, b) >= 0.0 && nmi(a, b) <= 1.0 + 1e-12));
    }
  }

  TEST_CASE("probe loss gradients pass finite differences on 20 instances each") {
    Rng rng(7);
    for (ProbeKind kind : {ProbeKind::Linear, ProbeKind::Mlp}) {
      CAPTURE(to_string(kind));
      double worst = 0;
      for (int t = 0; t < 20; ++t) {
        const Matrix x = testutil::random_matrix(12, 4, rng);
        Labels y(12);
        for (int& v : y) v = static_cast<int>(rng.below(3));
        ProbeModel model(kind, 4, 5, 3);
        model.initialize(rng());
        Objective f = [&](std::span<const double> p, std::span<double> grad) {
          ProbeModel m = model;
          m.params().assign(p.begin(), p.end());
          std::vector<double> g;
          const double v = m.loss(x, y, 0.05, grad.empty() ? nullptr : &g);
          if (!grad.empty()) std::copy(g.begin(), g.end(), grad.begin());
          return v;
        };
        worst = std::max(worst, finite_diff_check(f, model.params()));
      }
      CHECK(worst < 1e-4);
    }
  }

  TEST_CASE("probes reach 1.0 on separable data") {
    Rng rng(8);
    Matrix z(200, 2);
    Labels y(200);
    for (int i = 0; i < 200; ++i) {
      y[i] = i % 2;
      z(i, 0) = (y[i] == 0 ? -3.0 : 3.0) + 0.3 * rng.normal();
      z(i, 1) = rng.normal();
    }
    const Split s = make_split(200, 0.5, 0.2);
    CHECK(mlp_probe(z, y, s, {}).test_accuracy == 1.0);
    CHECK(linear_probe(z, y, s, {}).test_accuracy == 1.0);

    Matrix onehot = Matrix::Zero(120, 4);
    Labels c(120);
    for (int i = 0; i < 120; ++i) {
      c[i] = i % 4;
      onehot(i, c[i]) = 1.0;
    }
    CHECK(linear_probe(onehot, c, make_split(120, 0.5, 0.2), {}).test_accuracy == 1.0);
  }

  TEST_CASE("probe on shuffled labels is at chance") {
    Rng rng(9);
    const int n = 2800;
    const Matrix z = testutil::random_matrix(n, 16, rng);
    Labels y(n);
    for (int i = 0; i < n; ++i) y[i] = i % 7;
    rng.shuffle(std::span<int>(y));
    const auto r = mlp_probe(z, y, make_split(n, 0.48, 0.32), {.seed = 3});
    CHECK(std::abs(r.test_accuracy - 1.0 / 7.0) < 0.05);
  }

  TEST_CASE("probe determinism, early stopping and errors") {
    Rng rng(10);
    const Matrix z = testutil::random_matrix(100, 3, rng);
    Labels y(100);
    for (int i = 0; i < 100; ++i) y[i] = z(i, 0) > 0 ? 1 : 0;
    const Split s = make_split(100, 0.5, 0.2);
    const auto a = mlp_probe(z, y, s, {.seed = 4}), b = mlp_probe(z, y, s, {.seed = 4});
    CHECK(a.test_accuracy == b.test_accuracy);
    CHECK(a.loss_trace == b.loss_trace);
    CHECK(a.epochs_run <= 500);
    CHECK(a.epochs_run >= a.best_epoch + 1);

    Split no_val = s;
    no_val.val.clear();
    CHECK(linear_probe(z, y, no_val, {.epochs = 37}).epochs_run == 37);

    Split empty = s;
    empty.train.clear();
    CHECK_THROWS_CODE(mlp_probe(z, y, empty, {}), ErrorCode::EmptySplit);
    CHECK(probe_kind_from_string("linear") == ProbeKind::Linear);
    CHECK_THROWS(probe_kind_from_string("svm"));
  }

  TEST_CASE("linear and mlp probes agree on separable data") {
    Rng rng(11);
    Matrix z(150, 3);
    Labels y(150);
    for (int i = 0; i < 150; ++i) {
      y[i] = i % 3;
      for (int j = 0; j < 3; ++j) z(i, j) = (j == y[i] ? 4.0 : 0.0) + 0.2 * rng.normal();
    }
    const Split s = make_split(150, 0.5, 0.2);
    CHECK(linear_probe(z, y, s, {}).test_accuracy == mlp_probe(z, y, s, {}).test_accuracy);
  }
}
