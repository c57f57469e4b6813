#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectune/feasible_descent.hpp"
#include "spectune/gossip.hpp"
#include "spectune/graph.hpp"
#include "spectune/local_gradient.hpp"
#include "spectune/spectral_cost.hpp"

namespace spectune {

enum class RunMode { kCold, kWarm, kCentralized, kRegularizeOnly };

/// Deterministic commits worker proposals in ascending center order; free
/// commits them in completion order. Write sets are disjoint, so both give
/// the same weights.
enum class Scheduling { kDeterministic, kFree };

RunMode parse_run_mode(const std::string& s);
std::string to_string(RunMode m);

struct RunConfig {
  RunMode mode = RunMode::kCold;
  int workers = 8;
  int iterations = 200;
  double warm_split = 0.5;
  int gossip_draws = 10000;
  bool reinit_estimates = true;
  double tau_dom = 10.0;
  double tau_axis = 0.95;
  DescentParams descent;                              // per-worker inner loop
  DescentParams centralized = centralized_defaults();  // baseline solver
  std::uint64_t seed = 0;
  int eval_every = 1;
  Scheduling scheduling = Scheduling::kDeterministic;
  int threads = 0;  // 0: thread_budget()

  void validate() const;
};

struct CurvePoint {
  int iter = 0;
  double cost = 0.0;
  std::string phase;
};

struct IterationLog {
  int iter = 0;
  std::string phase;
  std::optional<double> cost;  // only on evaluation iterations
  int workers = 0;
  int accepted = 0;       // accepted descent steps over all workers
  int skipped_align = 0;  // workers whose first alignment test failed
  int skipped_core = 0;   // workers with an edgeless core
  int align_pass = 0;
  int align_fail = 0;
  std::vector<AlignmentReport> alignment;  // first gate check of each worker
  double budget_residual = 0.0;
  double min_weight = 0.0;
  int epoch = 0;
  double seconds = 0.0;
};

struct RunResult {
  std::vector<double> weights;
  std::vector<CurvePoint> curve;  // starts at (0, J0)
  std::vector<IterationLog> log;
  double j0 = 0.0;
  double jd = 0.0;
  std::optional<double> jstar;
  std::optional<double> dopr;
  std::string dopr_note;
  int phase_boundary = 0;  // last regularization iteration (0 if none)
  int epochs = 0;          // completed sweeps over all vertices
  std::vector<RegularizeTraceRow> regularize_trace;  // warm and regularize modes
  std::vector<GossipTraceRow> gossip_trace;
  std::optional<DescentRecord> centralized_record;   // centralized mode
};

/// Spectral descent over disjoint 1-hop neighborhoods, each expanded by
/// d = deg(C) hops and gated by the alignment test.
RunResult run_cold(const WeightedGraph& g, const CoefficientMatrix& c, const RunConfig& cfg);

/// Degree regularization for ceil(split * iterations) iterations, then
/// spectral descent for the rest.
RunResult run_warm(const WeightedGraph& g, const CoefficientMatrix& c, const RunConfig& cfg);

RunResult run_centralized(const WeightedGraph& g, const CoefficientMatrix& c,
                          const RunConfig& cfg);

RunResult run_regularize_only(const WeightedGraph& g, const CoefficientMatrix& c,
                              const RunConfig& cfg);

/// Dispatches on cfg.mode.
RunResult run(const WeightedGraph& g, const CoefficientMatrix& c, const RunConfig& cfg);

/// Fills jstar and dopr, or records why DOPR is undefined.
void attach_baseline(RunResult& r, double jstar);

}  // namespace spectune
