#include "spectune/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "spectune/errors.hpp"
#include "spectune/gossip.hpp"
#include "spectune/local_gradient.hpp"
#include "spectune/parallel.hpp"

namespace spectune {

RunMode parse_run_mode(const std::string& s) {
  if (s == "cold") return RunMode::kCold;
  if (s == "warm") return RunMode::kWarm;
  if (s == "centralized") return RunMode::kCentralized;
  if (s == "regularize" || s == "regularize-only") return RunMode::kRegularizeOnly;
  throw InvalidParam("unknown mode '" + s + "'");
}

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::kCold: return "cold";
    case RunMode::kWarm: return "warm";
    case RunMode::kCentralized: return "centralized";
    case RunMode::kRegularizeOnly: return "regularize";
  }
  return "unknown";
}

void RunConfig::validate() const {
  if (workers < 1) throw InvalidParam("workers must be >= 1");
  if (iterations < 0) throw InvalidParam("iterations must be >= 0");
  if (!(warm_split >= 0.0 && warm_split <= 1.0)) {
    throw InvalidParam("warm split must lie in [0,1]");
  }
  if (gossip_draws < 0) throw InvalidParam("gossip draws must be >= 0");
  if (!(tau_dom >= 0.0) || !(tau_axis >= 0.0 && tau_axis <= 1.0)) {
    throw InvalidParam("alignment thresholds out of range");
  }
  if (eval_every < 1) throw InvalidParam("eval_every must be >= 1");
  if (threads < 0) throw InvalidParam("threads must be >= 0");
  descent.validate();
  centralized.validate();
}

namespace {

constexpr std::uint64_t kGossipStream = 0x9E3779B97F4A7C15ULL;

using Clock = std::chrono::steady_clock;

/// Mutable run state shared by the phases of one pipeline.
class Pipeline {
 public:
  Pipeline(const WeightedGraph& g, const CoefficientMatrix& c, const RunConfig& cfg)
      : graph_(g), cost_(c), cfg_(cfg), budget_(g.total_weight()),
        threads_(cfg.threads > 0 ? cfg.threads : thread_budget()) {
    cfg_.validate();
    const auto w = g.weights();
    if (*std::min_element(w.begin(), w.end()) < cfg_.descent.floor) {
      throw InvalidParam("input graph has weights below the floor");
    }
    result_.j0 = cost_trace_form(graph_, cost_);
    result_.curve.push_back({0, result_.j0, "init"});
  }

  void regularize_phase(int iterations) {
    if (iterations <= 0) return;
    Rng rng(cfg_.seed + kGossipStream);
    RegularizeConfig rc;
    rc.workers = cfg_.workers;
    rc.gossip_draws = cfg_.gossip_draws;
    rc.iterations = iterations;
    rc.floor = cfg_.descent.floor;
    rc.reinit_estimates = cfg_.reinit_estimates;
    rc.threads = threads_;
    auto tick = Clock::now();
    rc.on_iteration = [&](int it, const WeightedGraph& cur) {
      IterationLog log;
      log.iter = ++iter_;
      log.phase = "regularize";
      std::vector<double> w(cur.weights().begin(), cur.weights().end());
      graph_.set_weights(std::move(w));
      finish_iteration(log, tick, it == iterations);
      tick = Clock::now();
    };
    const auto res = regularize(graph_, rc, rng);
    for (size_t i = 0; i < res.workers_per_iter.size(); ++i) {
      result_.log[result_.log.size() - res.workers_per_iter.size() + i].workers =
          res.workers_per_iter[i];
    }
    result_.phase_boundary = iter_;
    result_.regularize_trace = res.trace;
    result_.gossip_trace = res.gossip;
  }

  void descent_phase(int iterations) {
    if (iterations <= 0) return;
    const int d = cost_.degree();
    const AlignmentGate gate{cfg_.tau_dom, cfg_.tau_axis};
    for (int local_it = 1; local_it <= iterations; ++local_it) {
      const auto tick = Clock::now();
      IterationLog log;
      log.iter = ++iter_;
      log.phase = "descent";

      if (unvisited_.empty()) refill();
      auto scopes = sample_disjoint_neighborhoods(graph_, unvisited_, cfg_.workers, 1, rng_,
                                                  WriteSet::kInducedEdges);
      std::sort(scopes.begin(), scopes.end(), [](const SubgraphScope& a, const SubgraphScope& b) {
        return *a.center < *b.center;
      });
      if (!pairwise_edge_disjoint(graph_, scopes, WriteSet::kInducedEdges)) {
        throw std::logic_error("worker write sets overlap");
      }
      log.workers = static_cast<int>(scopes.size());

      struct Proposal {
        std::vector<EdgeId> edges;
        std::optional<LocalDescentResult> result;
        bool empty_core = false;
      };
      std::vector<Proposal> proposals(scopes.size());
      std::vector<int> completion;
      std::mutex completion_mutex;
      const WeightedGraph& snapshot = graph_;
      parallel_for(
          static_cast<int>(scopes.size()),
          [&](int i) {
            auto& p = proposals[static_cast<size_t>(i)];
            const auto& core = scopes[static_cast<size_t>(i)];
            p.edges = core.edges;
            if (core.edges.empty()) {
              p.empty_core = true;
            } else {
              const SubgraphScope h = dhop_expansion(snapshot, core, d);
              p.result = local_descent(snapshot, h, cost_, cfg_.descent, gate);
            }
            std::lock_guard lock(completion_mutex);
            completion.push_back(i);
          },
          threads_);

      std::vector<int> order(proposals.size());
      if (cfg_.scheduling == Scheduling::kDeterministic) {
        std::iota(order.begin(), order.end(), 0);
      } else {
        order = completion;
      }
      for (int i : order) {
        const auto& p = proposals[static_cast<size_t>(i)];
        if (p.empty_core) {
          ++log.skipped_core;
          continue;
        }
        const auto& r = *p.result;
        for (const auto& rep : r.alignment) (rep.pass ? log.align_pass : log.align_fail)++;
        if (!r.alignment.empty()) log.alignment.push_back(r.alignment.front());
        if (r.stopped_on_alignment && r.record.accepted_steps() == 0) ++log.skipped_align;
        log.accepted += r.record.accepted_steps();
        commit(p.edges, r.core_weights);
      }
      finish_iteration(log, tick, local_it == iterations);
    }
  }

  void centralized_phase() {
    const auto tick = Clock::now();
    const auto res = centralized_optimize(graph_, cost_, cfg_.centralized);
    graph_.set_weights(res.weights);
    for (size_t i = 1; i < res.record.steps.size(); ++i) {
      result_.curve.push_back({res.record.steps[i].step, res.record.steps[i].cost, "centralized"});
    }
    iter_ = res.record.accepted_steps();
    IterationLog log;
    log.iter = iter_;
    log.phase = "centralized";
    log.workers = 1;
    log.accepted = iter_;
    log.cost = res.record.jd;
    record_feasibility(log);
    log.seconds = std::chrono::duration<double>(Clock::now() - tick).count();
    result_.log.push_back(log);
    result_.centralized_record = res.record;
  }

  RunResult finish() {
    result_.weights.assign(graph_.weights().begin(), graph_.weights().end());
    result_.jd = cost_trace_form(graph_, cost_);
    if (result_.curve.back().iter != iter_) {
      result_.curve.push_back({iter_, result_.jd, result_.log.back().phase});
    }
    return std::move(result_);
  }

 private:
  void refill() {
    if (started_) ++result_.epochs;
    started_ = true;
    unvisited_.resize(static_cast<size_t>(graph_.num_vertices()));
    std::iota(unvisited_.begin(), unvisited_.end(), 0);
  }

  void commit(const std::vector<EdgeId>& edges, const std::vector<double>& proposed) {
    if (edges.size() != proposed.size()) throw std::logic_error("proposal size mismatch");
    double before = 0.0, after = 0.0;
    for (size_t i = 0; i < edges.size(); ++i) {
      before += graph_.weight(edges[i]);
      after += proposed[i];
      if (!(proposed[i] >= cfg_.descent.floor)) {
        throw std::logic_error("proposal violates the weight floor");
      }
    }
    if (std::abs(after - before) > 1e-9 * budget_) {
      throw std::logic_error("proposal changes the core budget");
    }
    for (size_t i = 0; i < edges.size(); ++i) graph_.set_weight(edges[i], proposed[i]);
  }

  void record_feasibility(IterationLog& log) const {
    const auto w = graph_.weights();
    log.budget_residual = std::abs(graph_.total_weight() - budget_);
    log.min_weight = *std::min_element(w.begin(), w.end());
    if (log.budget_residual > 1e-9 * budget_) {
      throw std::logic_error("total weight drifted from the budget");
    }
    if (log.min_weight < cfg_.descent.floor) {
      throw std::logic_error("weight below the floor after commit");
    }
  }

  void finish_iteration(IterationLog& log, Clock::time_point tick, bool last) {
    record_feasibility(log);
    if (log.iter % cfg_.eval_every == 0 || last) {
      log.cost = cost_trace_form(graph_, cost_);
      result_.curve.push_back({log.iter, *log.cost, log.phase});
    }
    log.epoch = result_.epochs;
    log.seconds = std::chrono::duration<double>(Clock::now() - tick).count();
    result_.log.push_back(log);
  }

  WeightedGraph graph_;
  const CoefficientMatrix& cost_;
  RunConfig cfg_;
  double budget_;
  int threads_;
  Rng rng_{cfg_.seed};
  std::vector<Vertex> unvisited_;
  bool started_ = false;
  int iter_ = 0;
  RunResult result_;
};

}  // namespace

RunResult run_cold(const WeightedGraph& g, const CoefficientMatrix& c, const RunConfig& cfg) {
  Pipeline p(g, c, cfg);
  p.descent_phase(cfg.iterations);
  return p.finish();
}

RunResult run_warm(const WeightedGraph& g, const CoefficientMatrix& c, const RunConfig& cfg) {
  Pipeline p(g, c, cfg);
  const int reg = static_cast<int>(std::ceil(cfg.warm_split * cfg.iterations - 1e-12));
  p.regularize_phase(reg);
  p.descent_phase(cfg.iterations - reg);
  return p.finish();
}

RunResult run_centralized(const WeightedGraph& g, const CoefficientMatrix& c,
                          const RunConfig& cfg) {
  Pipeline p(g, c, cfg);
  p.centralized_phase();
  auto r = p.finish();
  r.jstar = r.jd;
  return r;
}

RunResult run_regularize_only(const WeightedGraph& g, const CoefficientMatrix& c,
                              const RunConfig& cfg) {
  Pipeline p(g, c, cfg);
  p.regularize_phase(cfg.iterations);
  return p.finish();
}

RunResult run(const WeightedGraph& g, const CoefficientMatrix& c, const RunConfig& cfg) {
  switch (cfg.mode) {
    case RunMode::kCold: return run_cold(g, c, cfg);
    case RunMode::kWarm: return run_warm(g, c, cfg);
    case RunMode::kCentralized: return run_centralized(g, c, cfg);
    case RunMode::kRegularizeOnly: return run_regularize_only(g, c, cfg);
  }
  throw InvalidParam("unknown run mode");
}

void attach_baseline(RunResult& r, double jstar) {
  r.jstar = jstar;
  try {
    r.dopr = dopr(r.j0, r.jd, jstar);
    r.dopr_note.clear();
  } catch (const DegenerateBaseline& e) {
    r.dopr.reset();
    r.dopr_note = e.what();
  }
}

}  // namespace spectune
