#include <cmath>
#include <set>

#include "fuel/stats.hpp"
#include "fuel/theory.hpp"
#include "helpers.hpp"

using namespace fuel;

namespace {

double binomial_bound(std::int64_t samples) { return 3.0 * std::sqrt(0.25 / static_cast<double>(samples)); }

}  // namespace

TEST_SUITE("theory-bench") {
  // The closed forms are accepted only because they agree with the simulation oracle.
  TEST_CASE("monte-carlo oracle agrees with the closed form across a grid") {
    for (int n : {4, 10})
      for (int n0 : {0, n / 2, n - 1, n})
        for (double w : {0.0, 0.3, 0.7, 1.0}) {
          const SyntheticConfig cfg{.n = n, .n0 = n0, .w = w};
          CAPTURE(n);
          CAPTURE(n0);
          CAPTURE(w);
          const double mc = cs_monte_carlo(cfg, 200000, derive_seed(77, "grid", n * 100 + n0 * 10 + int(w * 10)));
          CHECK(std::abs(mc - cs_closed_form(cfg)) < binomial_bound(200000));
        }
  }

  TEST_CASE("monte-carlo sample moments match class_moments") {
    // The oracle simulates z directly; moments of z must match the formulas for m and s.
    const SyntheticConfig cfg{.n = 6, .n0 = 4, .mu = 1.3, .sigma = 0.8, .w = 0.6};
    Rng rng(5);
    double s1 = 0, s2 = 0;
    const int draws = 400000;
    for (int t = 0; t < draws; ++t) {
      double neigh = 0;
      for (int k = 0; k < cfg.n; ++k) neigh += rng.normal(k < cfg.n0 ? cfg.mu : -cfg.mu, cfg.sigma);
      const double z = (1 - cfg.w) * rng.normal(cfg.mu, cfg.sigma) + cfg.w * neigh / cfg.n;
      s1 += z;
      s2 += z * z;
    }
    const double mean = s1 / draws, var = s2 / draws - mean * mean;
    const auto m = class_moments(cfg);
    CHECK(std::abs(mean - m.mean) < 0.01);
    CHECK(std::abs(std::sqrt(var) - m.stddev) < 0.01);
    // Sample LCS from the same draws: (2 mean)^2 / var.
    CHECK(std::abs(4 * mean * mean / var - lcs_closed_form(cfg)) / lcs_closed_form(cfg) < 0.02);
  }

  TEST_CASE("cs_closed_form examples") {
    CHECK(cs_closed_form({.n = 7, .n0 = 2, .w = 0.0}) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
    CHECK(cs_closed_form({.n = 4, .n0 = 4, .w = 1.0}) == doctest::Approx(0.9772498680518208).epsilon(1e-12));
    CHECK(cs_closed_form({.n = 4, .n0 = 1, .mu = 0.0, .w = 0.4}) == 0.5);
  }

  TEST_CASE("lcs_closed_form examples") {
    CHECK(lcs_closed_form({.n = 7, .n0 = 2, .w = 0.0}) == doctest::Approx(4.0));
    CHECK(lcs_closed_form({.n = 4, .n0 = 4, .w = 1.0}) == doctest::Approx(16.0));
    CHECK(lcs_closed_form({.n = 4, .n0 = 1, .mu = 0.0, .w = 0.4}) == 0.0);
  }

  TEST_CASE("cs_monte_carlo examples") {
    const SyntheticConfig cfg{.n = 5, .n0 = 3, .w = 0.5};
    CHECK(std::abs(cs_monte_carlo(cfg, 100000, 1) - cs_closed_form(cfg)) < binomial_bound(100000));
    CHECK(std::abs(cs_monte_carlo({.n = 5, .n0 = 3, .mu = 0.0, .w = 0.5}, 1000000, 2) - 0.5) < 0.01);
    CHECK(cs_monte_carlo({.n = 5, .n0 = 5, .mu = 10.0, .w = 1.0}, 100000, 3) > 0.999);
    CHECK_THROWS_CODE(cs_monte_carlo(cfg, 0, 1), ErrorCode::InvalidArgument);
  }

  TEST_CASE("cs_monte_carlo does not depend on the thread count") {
    const SyntheticConfig cfg{.n = 6, .n0 = 2, .w = 0.4};
    const double one = cs_monte_carlo(cfg, 300001, 9, 1);
    for (int threads : {2, 3, 7}) CHECK(cs_monte_carlo(cfg, 300001, 9, threads) == one);
  }

  TEST_CASE("swapping the class sign leaves CS and LCS unchanged") {
    for (double w : {0.0, 0.25, 0.5, 0.9}) {
      const SyntheticConfig a{.n = 6, .n0 = 2, .mu = 1.5, .w = w}, b{.n = 6, .n0 = 2, .mu = -1.5, .w = w};
      CHECK(cs_closed_form(a) == cs_closed_form(b));
      CHECK(lcs_closed_form(a) == lcs_closed_form(b));
    }
  }

  TEST_CASE("with n0 = n both measures rise up to w* = n/(n+1) and fall after it") {
    for (int n : {1, 2, 4, 5, 10}) {
      CAPTURE(n);
      const double peak = static_cast<double>(n) / (n + 1);
      double prev_cs = -1, prev_lcs = -1;
      for (int k = 0; k <= 100; ++k) {
        const double w = k / 100.0;
        const SyntheticConfig cfg{.n = n, .n0 = n, .w = w};
        const double cs = cs_closed_form(cfg), lcs = lcs_closed_form(cfg);
        if (k > 0) {
          const double prev_w = (k - 1) / 100.0;
          if (w <= peak) {
            CHECK(cs >= prev_cs - 1e-12);
            CHECK(lcs >= prev_lcs - 1e-12);
          } else if (prev_w >= peak) {
            CHECK(cs <= prev_cs + 1e-12);
            CHECK(lcs <= prev_lcs + 1e-12);
          }
          CHECK((cs - prev_cs) * (lcs - prev_lcs) >= -1e-15);
        }
        prev_cs = cs;
        prev_lcs = lcs;
      }
    }
    // The maximum is interior, so the measures are not monotone on all of [0, 1].
    CHECK(lcs_closed_form({.n = 4, .n0 = 4, .w = 0.8}) == doctest::Approx(20.0));
    CHECK(lcs_closed_form({.n = 4, .n0 = 4, .w = 0.8}) > lcs_closed_form({.n = 4, .n0 = 4, .w = 1.0}));
  }

  TEST_CASE("theorem1_region_low") {
    CHECK(theorem1_region_low(5, 5) == 0.0);
    CHECK(theorem1_region_low(4, 2) == 0.0);
    CHECK(theorem1_region_low(10, 3) == doctest::Approx(4.0 / 14.0));
    CHECK(theorem1_region_low(10, 7) == 0.0);
    CHECK(theorem1_region_low(10, 0) == doctest::Approx(0.5));
  }

  TEST_CASE("theorem1_check examples") {
    const auto a = theorem1_check(4, 2, 0.25);
    CHECK(a.pass);
    CHECK(a.grid == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
    CHECK(a.cases == 10);

    const auto b = theorem1_check(10, 3, 0.05);
    CHECK(b.pass);
    CHECK(b.violations.empty());
    CHECK(b.grid.front() >= 4.0 / 14.0 - 1e-12);
    CHECK(b.grid.front() < 4.0 / 14.0 + 0.05);
    CHECK(b.grid.back() == doctest::Approx(1.0));

    const auto c = theorem1_check(5, 5, 0.1);
    CHECK(c.pass);
    CHECK(c.grid.size() == 11);
    CHECK(c.cases == 55);

    CHECK_THROWS_CODE(theorem1_check(5, 5, 0.9), ErrorCode::InvalidArgument);
    CHECK_THROWS_CODE(theorem1_check(5, 5, 0.0), ErrorCode::InvalidArgument);
  }

  TEST_CASE("theorem1 ordering matches sign enumeration by hand") {
    const auto r = theorem1_check(6, 2, 0.1);
    std::int64_t cases = 0;
    int violations = 0;
    for (std::size_t i = 0; i < r.grid.size(); ++i)
      for (std::size_t j = i + 1; j < r.grid.size(); ++j) {
        const SyntheticConfig a{.n = 6, .n0 = 2, .w = r.grid[i]}, b{.n = 6, .n0 = 2, .w = r.grid[j]};
        const double dc = cs_closed_form(a) - cs_closed_form(b), dl = lcs_closed_form(a) - lcs_closed_form(b);
        const int sc = std::abs(dc) <= 1e-12 ? 0 : (dc > 0 ? 1 : -1);
        const int sl = std::abs(dl) <= 1e-12 ? 0 : (dl > 0 ? 1 : -1);
        if (sc != 0 && sl != 0 && sc != sl) ++violations;
        ++cases;
      }
    CHECK(r.cases == cases);
    CHECK(static_cast<int>(r.violations.size()) == violations);
  }

  TEST_CASE("gen_synthetic satisfies the exact neighbor counts") {
    for (auto [n, n0] : std::vector<std::pair<int, int>>{{4, 2}, {10, 9}, {6, 0}, {5, 5}}) {
      CAPTURE(n);
      CAPTURE(n0);
      const Graph g = gen_synthetic({.n = n, .n0 = n0, .num_nodes = 100, .feature_dim = 2}, 11);
      validate(g);
      for (int u = 0; u < g.num_nodes; ++u) {
        CHECK(g.degree(u) == n);
        int same = 0;
        for (SparseMatrix::InnerIterator it(g.adjacency, u); it; ++it)
          if (g.labels[it.col()] == g.labels[u]) ++same;
        CHECK(same == n0);
      }
      CHECK(g.features.cols() == 2);
      CHECK(g.splits.size() == 10);
    }
    CHECK(edge_homophily(gen_synthetic({.n = 4, .n0 = 4, .num_nodes = 40}, 2)) == 1.0);
  }

  TEST_CASE("gen_synthetic features follow the class means") {
    const Graph g = gen_synthetic({.n = 4, .n0 = 2, .mu = 2.0, .sigma = 0.5, .num_nodes = 2000}, 3);
    double s0 = 0, s1 = 0;
    int c0 = 0;
    for (int i = 0; i < g.num_nodes; ++i) {
      if (g.labels[i] == 0) {
        s0 += g.features(i, 0);
        ++c0;
      } else {
        s1 += g.features(i, 0);
      }
    }
    CHECK(c0 == 1000);
    CHECK(std::abs(s0 / 1000 - 2.0) < 0.1);
    CHECK(std::abs(s1 / 1000 + 2.0) < 0.1);
  }

  TEST_CASE("gen_synthetic rejects infeasible degree sequences") {
    CHECK_THROWS_CODE(gen_synthetic({.n = 4, .n0 = 3, .num_nodes = 10}, 1), ErrorCode::InfeasibleDegreeSequence);
    CHECK_THROWS_CODE(gen_synthetic({.n = 4, .n0 = 2, .num_nodes = 11}, 1), ErrorCode::InfeasibleDegreeSequence);
    CHECK_THROWS_CODE(gen_synthetic({.n = 10, .n0 = 9, .num_nodes = 10}, 1), ErrorCode::InfeasibleDegreeSequence);
  }

  TEST_CASE("gen_synthetic is deterministic") {
    const SyntheticConfig cfg{.n = 4, .n0 = 2, .num_nodes = 60};
    const Graph a = gen_synthetic(cfg, 5), b = gen_synthetic(cfg, 5), c = gen_synthetic(cfg, 6);
    CHECK(a.edges() == b.edges());
    CHECK(a.features == b.features);
    CHECK(a.edges() != c.edges());
  }

  TEST_CASE("proxy_experiment") {
    const Graph g = gen_synthetic({.n = 6, .n0 = 5, .num_nodes = 200, .feature_dim = 4}, 8);
    const auto r = proxy_experiment(g, 12, 0.1, 3);
    CHECK(r.trials.size() == 12);
    CHECK_FALSE(r.low_trial_warning);
    for (const auto& t : r.trials) {
      CHECK(std::abs(t.alphas[0] + t.alphas[1] + t.alphas[2] - 1.0) < 1e-12);
      CHECK((t.accuracy >= 0.0 && t.accuracy <= 1.0));
    }
    CHECK(r.split.train.size() == 20);
    CHECK(r.split.test.size() == 180);
    const auto again = proxy_experiment(g, 12, 0.1, 3);
    CHECK(again.rho == r.rho);
    CHECK(proxy_experiment(g, 5, 0.1, 3).low_trial_warning);

    ProxyOptions fixed;
    fixed.alpha_sampler = [](Rng&) { return std::array<double, 3>{0.2, 0.3, 0.5}; };
    CHECK_THROWS_CODE(proxy_experiment(g, 10, 0.1, 3, fixed), ErrorCode::DegenerateInput);

    Graph unlabeled = g;
    unlabeled.labels.clear();
    CHECK_THROWS_CODE(proxy_experiment(unlabeled, 10, 0.1, 3), ErrorCode::UnlabeledEndpoint);
  }

  TEST_CASE("proxy rho is positive on a homophilic synthetic graph") {
    const Graph g = gen_synthetic({.n = 10, .n0 = 9, .num_nodes = 400, .feature_dim = 4}, 4);
    ProxyOptions labels_mode;
    labels_mode.latent = LatentClassMode::Labels;
    CHECK(proxy_experiment(g, 30, 0.1, 1, labels_mode).rho > 0.0);
    CHECK(proxy_experiment(g, 30, 0.1, 1).rho > 0.0);
  }
}
