#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spectune/graph.hpp"

namespace spectune {

/// Per-vertex estimates driven towards their mean by pairwise averaging.
struct GossipState {
  Eigen::VectorXd s;
  int round = 0;
};

/// R uniform-with-replacement edge draws; each replaces both endpoint
/// estimates by their mean. The sum of s is preserved.
void gossip_round(GossipState& state, const WeightedGraph& g, int draws, Rng& rng);

/// Applies a fixed sequence of edge averages.
void gossip_apply(GossipState& state, std::span<const Edge> draws);

/// Second-smallest eigenvalue of the Laplacian; `unweighted` uses unit weights.
double algebraic_connectivity(const WeightedGraph& g, bool unweighted = false);

/// (1 - lambda_2(L_unweighted) / (2|E|))^R, the expected per-iteration decay
/// factor of ||s - mean||^2.
double contraction_bound(const WeightedGraph& g, int draws);

/// sum_{i,j} (d_i - d_j)^2 over ordered pairs.
double degree_dispersion(const Eigen::VectorXd& degrees);

struct DegreeMatchResult {
  std::vector<Vertex> rows;    // center and its neighbors
  std::vector<EdgeId> edges;   // every edge touching a row vertex
  std::vector<double> weights;
  double residual = 0.0;       // ||B w - targets||
  int iterations = 0;
};

/// Least-squares fit of the weighted degrees of {center} + N1(center) to
/// `targets` (indexed by global vertex id) over the edges touching those
/// vertices, keeping their weight sum and the floor.
DegreeMatchResult local_degree_match(const WeightedGraph& g, Vertex center,
                                     std::span<const double> targets, double floor = 0.1,
                                     double tol = 1e-10, int max_iterations = 200000);

struct RegularizeConfig {
  int workers = 8;
  int gossip_draws = 10000;
  int iterations = 100;
  double floor = 0.1;
  /// Restart the estimates from the current weighted degrees every
  /// iteration; otherwise they carry over between iterations.
  bool reinit_estimates = true;
  int threads = 1;
  /// Called after every committed iteration with the updated graph.
  std::function<void(int iter, const WeightedGraph& g)> on_iteration;
};

struct RegularizeTraceRow {
  int iter = 0;
  double degree_dispersion = 0.0;
  double total_weight = 0.0;
};

struct GossipTraceRow {
  int round = 0;
  double znorm2 = 0.0;  // ||s - mean||^2 after the round
  double bound = 0.0;   // expected-value bound from the pre-round norm
};

struct RegularizeResult {
  std::vector<double> weights;
  std::vector<RegularizeTraceRow> trace;  // row 0 is the input graph
  std::vector<GossipTraceRow> gossip;
  std::vector<int> workers_per_iter;
};

/// One iteration = gossip round on the degree estimates, then parallel
/// degree matching on edge-disjoint 2-hop neighborhoods.
RegularizeResult regularize(const WeightedGraph& g, const RegularizeConfig& cfg, Rng& rng);

/// Coefficients a_k of h(x) = sum_k a_k x^k / k!.
struct SurrogateSeries {
  enum class LambdaMax { kExact, kTwiceMaxDegree };
  std::map<int, double> coeffs;
  LambdaMax lambda_max = LambdaMax::kTwiceMaxDegree;
};

struct SurrogateBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool hypothesis_ok = true;  // every even coefficient a_{2k}, k >= 1, non-negative
};

/// lhs = sum over all ordered pairs (diagonal included) of h(lambda_i - lambda_j);
/// rhs = the degree-based quadratic upper bound.
SurrogateBound surrogate_bound_eval(const WeightedGraph& g, const SurrogateSeries& series);

}  // namespace spectune
