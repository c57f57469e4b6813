#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "spectune/errors.hpp"
#include "spectune/gossip.hpp"

using namespace spectune;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

double centered(const Eigen::VectorXd& s) { return (s.array() - s.mean()).square().sum(); }

}  // namespace

TEST_CASE("gossip examples") {
  Rng rng(0);
  GossipState two{vec({1, 3}), 0};
  gossip_round(two, WeightedGraph::with_unit_weights(2, {{0, 1}}), 1, rng);
  CHECK(two.s == vec({2, 2}));
  CHECK(two.round == 1);

  GossipState p3{vec({4, 0, 2}), 0};
  const std::vector<Edge> draws{{0, 1}, {1, 2}};
  gossip_apply(p3, draws);
  CHECK(p3.s == vec({2, 2, 2}));

  GossipState flat{vec({1.5, 1.5, 1.5, 1.5}), 0};
  gossip_round(flat, fixtures::path(4), 50, rng);
  CHECK(flat.s == vec({1.5, 1.5, 1.5, 1.5}));
}

TEST_CASE("gossip preserves the sum") {
  Rng rng(1);
  const auto g = generate_geometric(40, 0.3, 2);
  std::uniform_real_distribution<double> ud(0.0, 10.0);
  GossipState st{Eigen::VectorXd(40), 0};
  for (Eigen::Index i = 0; i < 40; ++i) st.s[i] = ud(rng);
  const double total = st.s.sum();
  for (int r : {1, 7, 100, 1000}) {
    gossip_round(st, g, r, rng);
    CHECK(std::abs(st.s.sum() - total) <= 1e-12 * total);
  }
}

TEST_CASE("contraction_bound examples") {
  CHECK(contraction_bound(WeightedGraph::with_unit_weights(2, {{0, 1}}), 1) == doctest::Approx(0.0));
  CHECK(contraction_bound(fixtures::k3(), 1) == doctest::Approx(0.5));
  CHECK(contraction_bound(fixtures::k3(), 2) == doctest::Approx(0.25));
  CHECK(contraction_bound(fixtures::path(6), 0) == 1.0);
  // topology only: weights do not matter
  const WeightedGraph heavy(3, {{0, 1}, {1, 2}, {0, 2}}, {5.0, 0.2, 1.0});
  CHECK(contraction_bound(heavy, 3) == doctest::Approx(0.125));
}

TEST_CASE("gossip contraction in expectation") {
  const auto g = generate_geometric(50, 0.25, 42);
  Rng rng(7);
  std::normal_distribution<double> nd;
  for (int r : {1, 5, 25}) {
    double ratio_sum = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      GossipState st{Eigen::VectorXd(50), 0};
      for (Eigen::Index i = 0; i < 50; ++i) st.s[i] = nd(rng);
      const double before = centered(st.s);
      gossip_round(st, g, r, rng);
      ratio_sum += centered(st.s) / before;
    }
    CHECK(ratio_sum / trials <= contraction_bound(g, r) * (1.0 + 3.0 / std::sqrt(200.0)));
  }
}

TEST_CASE("degree_dispersion") {
  CHECK(degree_dispersion(fixtures::path(3).weighted_degrees()) == doctest::Approx(4.0));
  CHECK(degree_dispersion(fixtures::k3().weighted_degrees()) == 0.0);
  const Eigen::VectorXd d = vec({0.5, 2.0, 3.5, 1.0});
  double brute = 0.0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) brute += (d[i] - d[j]) * (d[i] - d[j]);
  }
  CHECK(degree_dispersion(d) == doctest::Approx(brute));
}

TEST_CASE("local_degree_match examples") {
  SUBCASE("star with targets (2,1,1)") {
    const WeightedGraph star(3, {{0, 1}, {0, 2}}, {0.5, 1.5});
    const std::vector<double> targets{2, 1, 1};
    const auto r = local_degree_match(star, 0, targets);
    REQUIRE(r.weights.size() == 2);
    CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.weights[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.residual <= 1e-9);
  }
  SUBCASE("targets equal current degrees leave weights unchanged") {
    std::mt19937_64 rng(3);
    const auto g = fixtures::random_connected(9, 0.3, rng, 0.5, 2.0);
    const Eigen::VectorXd d = g.weighted_degrees();
    const std::vector<double> targets(d.data(), d.data() + d.size());
    const auto r = local_degree_match(g, 4, targets);
    for (size_t i = 0; i < r.edges.size(); ++i) {
      CHECK(r.weights[i] == doctest::Approx(g.weight(r.edges[i])).epsilon(1e-12));
    }
  }
  SUBCASE("uniform K3") {
    const std::vector<double> targets{2, 2, 2};
    const auto r = local_degree_match(fixtures::k3(), 1, targets);
    CHECK(r.weights == std::vector<double>{1, 1, 1});
  }
  SUBCASE("scope covers the three edge classes") {
    const auto p5 = fixtures::path(5);
    const std::vector<double> targets(5, 1.6);
    const auto r = local_degree_match(p5, 2, targets);
    CHECK(r.rows == std::vector<Vertex>{1, 2, 3});
    CHECK(r.edges.size() == 4);  // includes the N1 -> N2 edges
    CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == doctest::Approx(4.0));
    for (double w : r.weights) CHECK(w >= 0.1);
  }
  SUBCASE("errors") {
    const std::vector<double> short_targets{1.0};
    CHECK_THROWS_AS(local_degree_match(fixtures::k3(), 0, short_targets), DimensionMismatch);
  }
}

TEST_CASE("regularize") {
  SUBCASE("K3 stays put") {
    Rng rng(1);
    RegularizeConfig cfg;
    cfg.iterations = 5;
    const auto r = regularize(fixtures::k3(), cfg, rng);
    CHECK(r.weights == std::vector<double>{1, 1, 1});
  }
  SUBCASE("zero iterations") {
    Rng rng(1);
    RegularizeConfig cfg;
    cfg.iterations = 0;
    const auto g = generate_geometric(30, 0.35, 1);
    const auto r = regularize(g, cfg, rng);
    CHECK(r.weights == std::vector<double>(g.weights().begin(), g.weights().end()));
  }
  SUBCASE("P3 cannot go below dispersion 4") {
    // degrees are (t, 2, 2 - t) under the budget, and t = 1 already minimizes dispersion
    Rng rng(4);
    RegularizeConfig cfg;
    cfg.iterations = 20;
    cfg.gossip_draws = 50;
    const auto r = regularize(fixtures::path(3), cfg, rng);
    CHECK(r.trace.front().degree_dispersion == doctest::Approx(4.0));
    for (const auto& row : r.trace) {
      CHECK(row.degree_dispersion >= 4.0 - 1e-9);
      CHECK(row.total_weight == doctest::Approx(2.0));
    }
  }
  SUBCASE("geometric graphs: weight conserved, dispersion mostly falls") {
    int steps = 0, falls = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Rng rng(seed);
      const auto g = generate_geometric(80, 0.22, seed);
      RegularizeConfig cfg;
      cfg.iterations = 20;
      const auto r = regularize(g, cfg, rng);
      const double w = g.total_weight();
      for (size_t i = 1; i < r.trace.size(); ++i) {
        CHECK(std::abs(r.trace[i].total_weight - w) <= 1e-9 * w);
        ++steps;
        if (r.trace[i].degree_dispersion <= r.trace[i - 1].degree_dispersion) ++falls;
      }
      CHECK(*std::min_element(r.weights.begin(), r.weights.end()) >= 0.1);
      CHECK(r.gossip.size() == 20);
      CHECK(r.trace.back().degree_dispersion < 0.5 * r.trace.front().degree_dispersion);
    }
    // individual steps are noisy: edits on N1 -> N2 edges move degrees outside the fitted rows
    CHECK(falls >= 0.7 * steps);
  }
}

TEST_CASE("surrogate bound") {
  SurrogateSeries sq;
  sq.coeffs = {{2, 2.0}};
  const auto k3 = surrogate_bound_eval(fixtures::k3(), sq);
  CHECK(k3.lhs == doctest::Approx(36.0));
  CHECK(k3.rhs == doctest::Approx(72.0));
  CHECK(k3.hypothesis_ok);

  SurrogateSeries constant;
  constant.coeffs = {{0, 1.5}};
  std::mt19937_64 rng(2);
  const auto g = fixtures::random_connected(6, 0.4, rng);
  const auto c = surrogate_bound_eval(g, constant);
  CHECK(c.lhs == doctest::Approx(1.5 * 36));
  CHECK(c.rhs == doctest::Approx(1.5 * 36));

  // regular graph: degree-difference term vanishes
  const auto c4 = fixtures::complete(4);
  const auto r = surrogate_bound_eval(c4, sq);
  CHECK(r.rhs == doctest::Approx(2.0 * 12.0 * 12.0));

  SurrogateSeries bad;
  bad.coeffs = {{2, -1.0}};
  CHECK_FALSE(surrogate_bound_eval(c4, bad).hypothesis_ok);
}
