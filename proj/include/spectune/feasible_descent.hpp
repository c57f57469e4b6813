#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spectune/graph.hpp"
#include "spectune/local_gradient.hpp"
#include "spectune/spectral_cost.hpp"

namespace spectune {

/// Projected-gradient settings shared by the local and centralized solvers.
struct DescentParams {
  int max_steps = 5;
  double initial_step = 1.0;  // scaled by 1 / ||grad||_inf each step
  double beta = 0.5;          // backtracking factor
  double c1 = 1e-4;           // Armijo constant
  double floor = 0.1;         // minimum edge weight
  double pg_tol = 1e-6;       // stop when ||pg|| <= pg_tol * ||pg_0||
  int max_backtracks = 60;

  void validate() const;
};

struct DescentStep {
  int step = 0;
  double cost = 0.0;
  double step_size = 0.0;
  double pg_norm = 0.0;
  double budget_residual = 0.0;
  double min_weight = 0.0;
};

struct DescentRecord {
  std::vector<DescentStep> steps;  // row 0 is the starting point
  double j0 = 0.0;
  double jd = 0.0;
  std::optional<double> jstar;
  std::optional<double> dopr;

  int accepted_steps() const { return static_cast<int>(steps.size()) - 1; }
};

/// Euclidean projection onto {w : sum(w) = budget, w >= floor}.
///
/// Shift by the floor, project onto the scaled simplex with the sort-based
/// threshold, shift back. Inputs that are already feasible (within
/// 1e-12 * budget on the sum) come back unchanged, which makes the map
/// idempotent bit for bit.
std::vector<double> project_feasible(std::span<const double> w, double budget,
                                     double floor);

/// Projection of -grad onto the tangent cone of the feasible set at w.
/// Its norm is the first-order stationarity measure.
std::vector<double> projected_gradient(std::span<const double> w,
                                       std::span<const double> grad, double floor);

struct AlignmentGate {
  double tau_dom = 10.0;
  double tau_axis = 0.95;
};

struct LocalDescentResult {
  std::vector<double> core_weights;
  DescentRecord record;
  std::vector<AlignmentReport> alignment;  // one per gate check
  bool stopped_on_alignment = false;
};

/// Projected gradient descent of J_H over the core-edge weights of H, other
/// weights frozen at g's values. The core budget is the initial core sum.
/// With a gate, the alignment test runs before every step and a failure
/// ends the call.
LocalDescentResult local_descent(const WeightedGraph& g, const SubgraphScope& h,
                                 const CoefficientMatrix& c, const DescentParams& params,
                                 std::optional<AlignmentGate> gate = std::nullopt);

struct CentralizedResult {
  std::vector<double> weights;
  DescentRecord record;
};

/// Same solver with H = H' = G and budget W.
CentralizedResult centralized_optimize(const WeightedGraph& g, const CoefficientMatrix& c,
                                       const DescentParams& params);

/// Default settings for the centralized baseline (many more steps).
DescentParams centralized_defaults();

/// (J0 - Jd) / (J0 - J*), not clamped.
double dopr(double j0, double jd, double jstar);

}  // namespace spectune
