#include "spectune/feasible_descent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "spectune/errors.hpp"

namespace spectune {

void DescentParams::validate() const {
  if (max_steps < 0) throw InvalidParam("max_steps must be non-negative");
  if (!(initial_step > 0.0)) throw InvalidParam("initial_step must be positive");
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidParam("beta must lie in (0,1)");
  if (!(c1 > 0.0 && c1 < 1.0)) throw InvalidParam("c1 must lie in (0,1)");
  if (!(floor >= 0.0)) throw InvalidParam("floor must be non-negative");
  if (!(pg_tol >= 0.0)) throw InvalidParam("pg_tol must be non-negative");
  if (max_backtracks < 1) throw InvalidParam("max_backtracks must be positive");
}

namespace {

double sum_of(std::span<const double> w) {
  return std::accumulate(w.begin(), w.end(), 0.0);
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> project_feasible(std::span<const double> w, double budget,
                                     double floor) {
  const auto n = w.size();
  if (n == 0) throw InvalidParam("cannot project an empty weight vector");
  const double mass = budget - floor * static_cast<double>(n);
  if (mass < -1e-12 * std::abs(budget)) {
    throw InfeasibleBudget("budget " + std::to_string(budget) + " below floor * count " +
                           std::to_string(floor * static_cast<double>(n)));
  }
  const double tol = 1e-12 * std::abs(budget);
  const bool feasible =
      std::all_of(w.begin(), w.end(), [&](double x) { return x >= floor; }) &&
      std::abs(sum_of(w) - budget) <= tol;
  if (feasible) return {w.begin(), w.end()};

  std::vector<double> out(n, floor);
  if (mass <= 0.0) return out;

  // Simplex threshold on the shifted vector.
  std::vector<double> sorted(n);
  for (size_t i = 0; i < n; ++i) sorted[i] = w[i] - floor;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (size_t j = 0; j < n; ++j) {
    cumsum += sorted[j];
    const double t = (cumsum - mass) / static_cast<double>(j + 1);
    if (sorted[j] - t > 0.0) theta = t;
  }
  for (size_t i = 0; i < n; ++i) out[i] = std::max(w[i] - floor - theta, 0.0) + floor;

  // Push the rounding residual onto the largest entry.
  const double residual = budget - sum_of(out);
  auto top = std::max_element(out.begin(), out.end());
  *top = std::max(*top + residual, floor);
  return out;
}

std::vector<double> projected_gradient(std::span<const double> w,
                                       std::span<const double> grad, double floor) {
  if (w.size() != grad.size()) throw DimensionMismatch("weights vs gradient length");
  const size_t n = w.size();
  std::vector<double> d(n, 0.0);
  if (n == 0) return d;

  // Tangent cone: sum(d) = 0, d_i >= 0 where w_i sits on the floor.
  // d_i = mu - g_i on free coordinates, max(0, mu - g_i) on active ones.
  double free_sum = 0.0;
  int free_count = 0;
  std::vector<double> active;
  for (size_t i = 0; i < n; ++i) {
    if (w[i] <= floor) {
      active.push_back(grad[i]);
    } else {
      free_sum += grad[i];
      ++free_count;
    }
  }
  if (free_count == 0) return d;
  std::sort(active.begin(), active.end());
  double acc = free_sum;
  int count = free_count;
  double mu = acc / count;
  for (double a : active) {
    if (a >= mu) break;
    acc += a;
    ++count;
    mu = acc / count;
  }
  for (size_t i = 0; i < n; ++i) {
    const double di = mu - grad[i];
    d[i] = (w[i] <= floor) ? std::max(0.0, di) : di;
  }
  return d;
}

LocalDescentResult local_descent(const WeightedGraph& g, const SubgraphScope& h,
                                 const CoefficientMatrix& c, const DescentParams& params,
                                 std::optional<AlignmentGate> gate) {
  params.validate();
  SubgraphModel model(g, h);
  if (model.num_core_edges() == 0) throw EmptyCore("subgraph core has no edges");
  const int d = c.degree();

  LocalDescentResult out;
  std::vector<double> w = model.core_weights();
  const double budget = sum_of(w);

  auto cost_at = [&](std::span<const double> x) {
    model.set_core_weights(x);
    return bilinear_cost(model.powers(d).traces(), c);
  };

  double pg0 = -1.0;
  double cost = 0.0;
  for (int step = 0;; ++step) {
    model.set_core_weights(w);
    const LaplacianPowers powers = model.powers(d);
    const TracePowerVector v = powers.traces();
    cost = bilinear_cost(v, c);
    const ZMatrix z = model.z_matrix(powers);
    const Eigen::VectorXd grad_e = gradient(z, c, v);
    const std::vector<double> grad(grad_e.data(), grad_e.data() + grad_e.size());
    const double pg = norm2(projected_gradient(w, grad, params.floor));

    if (step == 0) {
      out.record.j0 = cost;
      out.record.steps.push_back({0, cost, 0.0, pg, std::abs(sum_of(w) - budget),
                                  *std::min_element(w.begin(), w.end())});
      pg0 = pg;
    } else {
      out.record.steps.back().pg_norm = pg;
    }

    if (step >= params.max_steps) break;
    if (pg == 0.0 || pg <= params.pg_tol * pg0) break;
    if (gate) {
      out.alignment.push_back(alignment_test(z, c, gate->tau_dom, gate->tau_axis));
      if (!out.alignment.back().pass) {
        out.stopped_on_alignment = true;
        break;
      }
    }

    double gmax = 0.0;
    for (double x : grad) gmax = std::max(gmax, std::abs(x));
    double t = params.initial_step / gmax;
    bool accepted = false;
    std::vector<double> trial(w.size());
    for (int bt = 0; bt < params.max_backtracks; ++bt, t *= params.beta) {
      for (size_t i = 0; i < w.size(); ++i) trial[i] = w[i] - t * grad[i];
      trial = project_feasible(trial, budget, params.floor);
      double decrease = 0.0;  // grad . (trial - w)
      bool moved = false;
      for (size_t i = 0; i < w.size(); ++i) {
        decrease += grad[i] * (trial[i] - w[i]);
        moved = moved || trial[i] != w[i];
      }
      if (!moved) break;
      const double trial_cost = cost_at(trial);
      if (trial_cost <= cost + params.c1 * decrease && trial_cost < cost) {
        w = trial;
        accepted = true;
        out.record.steps.push_back({step + 1, trial_cost, t, 0.0,
                                    std::abs(sum_of(w) - budget),
                                    *std::min_element(w.begin(), w.end())});
        break;
      }
    }
    if (!accepted) break;
  }

  out.record.jd = out.record.steps.back().cost;
  out.core_weights = std::move(w);
  return out;
}

DescentParams centralized_defaults() {
  DescentParams p;
  p.max_steps = 3000;
  p.pg_tol = 1e-7;
  return p;
}

CentralizedResult centralized_optimize(const WeightedGraph& g, const CoefficientMatrix& c,
                                       const DescentParams& params) {
  auto local = local_descent(g, whole_graph_scope(g), c, params);
  CentralizedResult out;
  out.weights = std::move(local.core_weights);
  out.record = std::move(local.record);
  out.record.jstar = out.record.jd;
  return out;
}

double dopr(double j0, double jd, double jstar) {
  if (std::abs(j0 - jstar) < 1e-15 * std::abs(j0) || j0 == jstar) {
    throw DegenerateBaseline("J0 and J* coincide (" + std::to_string(j0) + ")");
  }
  return (j0 - jd) / (j0 - jstar);
}

}  // namespace spectune
