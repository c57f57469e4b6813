#include "spectune/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spectune/errors.hpp"
#include "spectune/feasible_descent.hpp"
#include "spectune/parallel.hpp"
#include "spectune/spectral_cost.hpp"

namespace spectune {

void gossip_round(GossipState& state, const WeightedGraph& g, int draws, Rng& rng) {
  if (g.num_edges() == 0) throw InvalidParam("gossip needs at least one edge");
  if (draws < 0) throw InvalidParam("gossip draw count must be non-negative");
  std::uniform_int_distribution<EdgeId> pick(0, g.num_edges() - 1);
  for (int r = 0; r < draws; ++r) {
    const Edge& e = g.edge(pick(rng));
    const double mean = 0.5 * (state.s[e.u] + state.s[e.v]);
    state.s[e.u] = mean;
    state.s[e.v] = mean;
  }
  ++state.round;
}

void gossip_apply(GossipState& state, std::span<const Edge> draws) {
  for (const Edge& e : draws) {
    const double mean = 0.5 * (state.s[e.u] + state.s[e.v]);
    state.s[e.u] = mean;
    state.s[e.v] = mean;
  }
  ++state.round;
}

double algebraic_connectivity(const WeightedGraph& g, bool unweighted) {
  if (g.num_vertices() < 2) return 0.0;
  Eigen::MatrixXd l;
  if (unweighted) {
    l = laplacian(WeightedGraph::with_unit_weights(g.num_vertices(), g.edges()));
  } else {
    l = laplacian(g);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[1];
}

double contraction_bound(const WeightedGraph& g, int draws) {
  if (draws < 0) throw InvalidParam("draw count must be non-negative");
  if (draws == 0) return 1.0;
  const double lambda2 = algebraic_connectivity(g, /*unweighted=*/true);
  const double per_draw = std::max(0.0, 1.0 - lambda2 / (2.0 * g.num_edges()));
  return std::pow(per_draw, draws);
}

double degree_dispersion(const Eigen::VectorXd& degrees) {
  const auto n = static_cast<double>(degrees.size());
  if (degrees.size() == 0) return 0.0;
  const double mean = degrees.mean();
  return 2.0 * n * (degrees.array() - mean).square().sum();
}

DegreeMatchResult local_degree_match(const WeightedGraph& g, Vertex center,
                                     std::span<const double> targets, double floor,
                                     double tol, int max_iterations) {
  if (center < 0 || center >= g.num_vertices()) {
    throw InvalidParam("center " + std::to_string(center) + " out of range");
  }
  if (static_cast<int>(targets.size()) != g.num_vertices()) {
    throw DimensionMismatch("targets must hold one value per vertex");
  }
  DegreeMatchResult out;
  out.rows.push_back(center);
  for (const auto& inc : g.incident(center)) out.rows.push_back(inc.neighbor);
  std::sort(out.rows.begin(), out.rows.end());
  for (Vertex v : out.rows) {
    for (const auto& inc : g.incident(v)) out.edges.push_back(inc.edge);
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  if (out.edges.empty()) throw EmptyScope("no edges touch the neighborhood");

  const Eigen::MatrixXd b = incidence(g, out.rows, out.edges);
  Eigen::VectorXd t(static_cast<Eigen::Index>(out.rows.size()));
  for (size_t i = 0; i < out.rows.size(); ++i) {
    t[static_cast<Eigen::Index>(i)] = targets[static_cast<size_t>(out.rows[i])];
  }
  std::vector<double> w;
  w.reserve(out.edges.size());
  for (EdgeId e : out.edges) w.push_back(g.weight(e));
  const double budget = std::accumulate(w.begin(), w.end(), 0.0);

  // Step 1/L with L = 2 lambda_max(B B^T), the gradient's Lipschitz constant.
  const Eigen::MatrixXd bbt = b * b.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bbt, Eigen::EigenvaluesOnly);
  const double lipschitz = 2.0 * es.eigenvalues().maxCoeff();
  const double step = 1.0 / lipschitz;

  const auto as_vector = [&] {
    return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  };
  std::vector<double> trial(w.size());
  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    const Eigen::VectorXd grad = 2.0 * b.transpose() * (b * as_vector() - t);
    const auto pg = projected_gradient(w, std::span<const double>(grad.data(), w.size()), floor);
    double pg_norm = 0.0;
    for (double x : pg) pg_norm += x * x;
    if (std::sqrt(pg_norm) <= tol) break;
    for (size_t i = 0; i < w.size(); ++i) trial[i] = w[i] - step * grad[static_cast<Eigen::Index>(i)];
    auto next = project_feasible(trial, budget, floor);
    if (next == w) break;
    w = std::move(next);
  }
  out.residual = (b * as_vector() - t).norm();
  out.weights = std::move(w);
  return out;
}

namespace {

double centered_norm2(const Eigen::VectorXd& s) {
  return (s.array() - s.mean()).square().sum();
}

}  // namespace

RegularizeResult regularize(const WeightedGraph& g, const RegularizeConfig& cfg, Rng& rng) {
  if (cfg.workers < 1) throw InvalidParam("worker count must be at least 1");
  if (cfg.gossip_draws < 0) throw InvalidParam("gossip draw count must be non-negative");
  if (cfg.iterations < 0) throw InvalidParam("iteration count must be non-negative");

  WeightedGraph cur = g;
  RegularizeResult out;
  out.trace.push_back({0, degree_dispersion(cur.weighted_degrees()), cur.total_weight()});
  if (cfg.iterations == 0) {
    out.weights.assign(cur.weights().begin(), cur.weights().end());
    return out;
  }

  const double factor = contraction_bound(cur, cfg.gossip_draws);
  GossipState state{cur.weighted_degrees(), 0};
  for (int it = 1; it <= cfg.iterations; ++it) {
    if (cfg.reinit_estimates) state.s = cur.weighted_degrees();
    const double before = centered_norm2(state.s);
    gossip_round(state, cur, cfg.gossip_draws, rng);
    out.gossip.push_back({it, centered_norm2(state.s), factor * before});

    std::vector<Vertex> pool(static_cast<size_t>(cur.num_vertices()));
    std::iota(pool.begin(), pool.end(), 0);
    auto scopes = sample_disjoint_neighborhoods(cur, pool, cfg.workers, 2, rng,
                                                WriteSet::kIncidentToCore);
    std::sort(scopes.begin(), scopes.end(),
              [](const SubgraphScope& a, const SubgraphScope& b) { return *a.center < *b.center; });

    std::vector<DegreeMatchResult> results(scopes.size());
    const std::span<const double> targets(state.s.data(), static_cast<size_t>(state.s.size()));
    parallel_for(
        static_cast<int>(scopes.size()),
        [&](int i) {
          results[static_cast<size_t>(i)] =
              local_degree_match(cur, *scopes[static_cast<size_t>(i)].center, targets, cfg.floor);
        },
        cfg.threads);

    std::vector<double> w(cur.weights().begin(), cur.weights().end());
    for (const auto& r : results) {
      for (size_t j = 0; j < r.edges.size(); ++j) w[static_cast<size_t>(r.edges[j])] = r.weights[j];
    }
    cur.set_weights(std::move(w));
    out.workers_per_iter.push_back(static_cast<int>(scopes.size()));
    out.trace.push_back({it, degree_dispersion(cur.weighted_degrees()), cur.total_weight()});
    if (cfg.on_iteration) cfg.on_iteration(it, cur);
  }
  out.weights.assign(cur.weights().begin(), cur.weights().end());
  return out;
}

SurrogateBound surrogate_bound_eval(const WeightedGraph& g, const SurrogateSeries& series) {
  SurrogateBound out;
  const Eigen::VectorXd lambda = laplacian_spectrum(g);
  const auto n = lambda.size();

  auto h = [&](double x) {
    double total = 0.0;
    for (const auto& [k, a] : series.coeffs) {
      if (k < 0) throw InvalidParam("negative power in series");
      total += a * std::pow(x, k) / std::tgamma(k + 1.0);
    }
    return total;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out.lhs += h(lambda[i] - lambda[j]);
  }

  const Eigen::VectorXd deg = g.weighted_degrees();
  const double lmax = series.lambda_max == SurrogateSeries::LambdaMax::kExact
                          ? lambda.maxCoeff()
                          : 2.0 * deg.maxCoeff();
  double a0 = 0.0;
  double even_sum = 0.0;
  for (const auto& [k, a] : series.coeffs) {
    if (k == 0) a0 = a;
    if (k >= 2 && k % 2 == 0) {
      if (a < 0.0) out.hypothesis_ok = false;
      even_sum += a / std::tgamma(k + 1.0) * std::pow(lmax, k - 2);
    }
  }
  const double trace_d = deg.sum();
  out.rhs = a0 * static_cast<double>(n * n) +
            2.0 * even_sum * (degree_dispersion(deg) + trace_d * trace_d);
  return out;
}

}  // namespace spectune
