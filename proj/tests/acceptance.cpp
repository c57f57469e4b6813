// Acceptance checks. One PASS/FAIL line per criterion.
//
//   acceptance [--only N[,N...]] [--allow-fail N[,N...]] [--csv FILE]
//
// The exit status is non-zero when a criterion fails that was not listed in
// --allow-fail. Allowed failures still print FAIL.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "spectune/errors.hpp"
#include "spectune/experiment.hpp"
#include "spectune/feasible_descent.hpp"
#include "spectune/gossip.hpp"
#include "spectune/io.hpp"
#include "spectune/local_gradient.hpp"
#include "spectune/orchestrator.hpp"
#include "spectune/parallel.hpp"

using namespace spectune;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double quartic_minus_square(double x, double y) {
  const double t = x - y;
  return t * t * t * t - t * t;
}

// 1. trace form vs eigenvalue double sum
Outcome bilinear_form() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  const auto c = quartic_spread_cost();
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 11;
    const auto g = fixtures::random_connected(n, 0.35, rng, 0.1, 2.0);
    const double tf = cost_trace_form(g, c);
    const double oracle = cost_eigen_oracle(g, quartic_minus_square);
    worst = std::max(worst, std::abs(tf - oracle) / std::max(std::abs(oracle), 1e-300));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 10.0,
          fmt("100 graphs, worst relative error %.3g (tol 1e-9), %.2fs (limit 10s)", worst, secs)};
}

// 2. gradient vs central differences, plus the K3 fixture
Outcome gradient_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2002);
  const auto c = quartic_spread_cost();
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + t % 13;
    const auto g = fixtures::random_connected(n, 0.3, rng, 0.1, 2.0);
    const auto z = z_matrix(g, whole_graph_scope(g), c.degree());
    const Eigen::VectorXd grad = gradient(z, c, trace_powers(laplacian(g), c.degree()));
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const double w = g.weight(e);
      const double h = 1e-6 * std::max(1.0, std::abs(w));
      WeightedGraph plus = g, minus = g;
      plus.set_weight(e, w + h);
      minus.set_weight(e, w - h);
      const double fd = (cost_trace_form(plus, c) - cost_trace_form(minus, c)) / (2.0 * h);
      worst = std::max(worst, std::abs(grad[e] - fd) / std::abs(fd));
    }
  }
  const auto k3 = fixtures::k3();
  const Eigen::VectorXd gk3 =
      gradient(z_matrix(k3, whole_graph_scope(k3), 4), c, trace_powers(laplacian(k3), 4));
  const bool k3_ok = gk3 == Eigen::VectorXd::Constant(3, 408.0);
  const double s = 1e-6;
  WeightedGraph up = k3, down = k3;
  up.set_weights({1 + s, 1 + s, 1 + s});
  down.set_weights({1 - s, 1 - s, 1 - s});
  const double djds = (cost_trace_form(up, c) - cost_trace_form(down, c)) / (2 * s);
  const bool scale_ok = std::abs(djds - 1224.0) <= 1e-4 * 1224.0 && gk3.sum() == 1224.0;
  const double secs = seconds_since(t0);
  return {worst <= 1e-4 && k3_ok && scale_ok && secs < 30.0,
          fmt("50 graphs, worst relative error %.3g (tol 1e-4); K3 components %s 408, dJ/ds %.6f; %.2fs",
              worst, k3_ok ? "all" : "NOT all", djds, secs)};
}

// 3. exact locality of perturbation traces with integer arithmetic
Outcome locality() {
  using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
  const auto int_laplacian = [](const WeightedGraph& g, const std::vector<Vertex>& verts,
                                const std::vector<EdgeId>& edges) {
    std::vector<int> local(static_cast<size_t>(g.num_vertices()), -1);
    for (size_t i = 0; i < verts.size(); ++i) local[static_cast<size_t>(verts[i])] = static_cast<int>(i);
    const auto m = static_cast<Eigen::Index>(verts.size());
    IntMatrix l = IntMatrix::Zero(m, m);
    for (EdgeId e : edges) {
      const int a = local[static_cast<size_t>(g.edge(e).u)];
      const int b = local[static_cast<size_t>(g.edge(e).v)];
      l(a, a) += 1;
      l(b, b) += 1;
      l(a, b) -= 1;
      l(b, a) -= 1;
    }
    return std::pair{l, local};
  };

  std::mt19937_64 rng(3003);
  const int d = 4;
  long checked = 0, mismatched = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 15 + t % 26;
    const auto g = fixtures::random_connected(n, 2.5 / n, rng, 1.0, 1.0, true);
    const auto whole = whole_graph_scope(g);
    const auto [lg, gl] = int_laplacian(g, whole.vertices, whole.edges);
    for (int trial = 0; trial < 3; ++trial) {
      const Vertex center = std::uniform_int_distribution<int>(0, n - 1)(rng);
      const auto h = dhop_expansion(g, khop_neighborhood(g, center, 1), d);
      // the core sits at depth >= d inside the expansion
      const auto deep = khop_core(g, h, d);
      const auto [lh, hl] = int_laplacian(g, h.vertices, h.edges);
      IntMatrix pg = IntMatrix::Identity(n, n);
      IntMatrix ph = IntMatrix::Identity(lh.rows(), lh.cols());
      for (int p = 1; p <= d; ++p) {
        for (EdgeId e : h.core_edges) {
          const auto [a, b] = g.edge(e);
          if (!std::binary_search(deep.core_vertices.begin(), deep.core_vertices.end(), a) ||
              !std::binary_search(deep.core_vertices.begin(), deep.core_vertices.end(), b)) {
            ++mismatched;  // depth precondition broken
            continue;
          }
          const auto la = hl[static_cast<size_t>(a)], lb = hl[static_cast<size_t>(b)];
          ++checked;
          if (pg(a, a) + pg(b, b) - 2 * pg(a, b) != ph(la, la) + ph(lb, lb) - 2 * ph(la, lb)) {
            ++mismatched;
          }
        }
        pg = pg * lg;
        ph = ph * lh;
      }
    }
  }
  return {mismatched == 0 && checked > 0,
          fmt("50 unweighted graphs, %ld exact comparisons, %ld mismatches", checked, mismatched)};
}

// 5. gossip contraction in expectation
Outcome gossip_contraction() {
  const auto t0 = Clock::now();
  const auto g = generate_geometric(50, 0.25, 5005);
  Rng rng(5005);
  std::normal_distribution<double> nd;
  const int trials = 200;
  bool ok = true;
  std::string detail = "n=50";
  for (int r : {1, 5, 25}) {
    double mean = 0.0;
    for (int t = 0; t < trials; ++t) {
      GossipState st{Eigen::VectorXd(50), 0};
      for (Eigen::Index i = 0; i < 50; ++i) st.s[i] = nd(rng);
      const double before = (st.s.array() - st.s.mean()).square().sum();
      gossip_round(st, g, r, rng);
      mean += (st.s.array() - st.s.mean()).square().sum() / before;
    }
    mean /= trials;
    const double limit = contraction_bound(g, r) * (1.0 + 3.0 / std::sqrt(200.0));
    ok = ok && mean <= limit;
    detail += fmt("; R=%d mean %.4f <= %.4f", r, mean, limit);
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 20.0, detail + fmt("; %.2fs", secs)};
}

// 6. surrogate bound
Outcome surrogate() {
  std::mt19937_64 rng(6006);
  long checks = 0, violations = 0;
  for (int t = 0; t < 100; ++t) {
    const auto g = fixtures::random_connected(2 + t % 9, 0.35, rng, 0.1, 2.0);
    for (double a2 : {0.0, 1.0, 2.0}) {
      for (double a4 : {0.0, 1.0, 2.0}) {
        for (auto mode : {SurrogateSeries::LambdaMax::kExact, SurrogateSeries::LambdaMax::kTwiceMaxDegree}) {
          SurrogateSeries s;
          s.coeffs = {{2, a2}, {4, a4}};
          s.lambda_max = mode;
          const auto b = surrogate_bound_eval(g, s);
          ++checks;
          if (b.lhs > b.rhs + 1e-9 * std::abs(b.rhs)) ++violations;
        }
      }
    }
  }
  SurrogateSeries sq;
  sq.coeffs = {{2, 2.0}};
  const auto k3 = surrogate_bound_eval(fixtures::k3(), sq);
  const bool k3_ok = std::abs(k3.lhs - 36.0) <= 1e-9 * 36.0 && std::abs(k3.rhs - 72.0) <= 1e-9 * 72.0;
  return {violations == 0 && k3_ok,
          fmt("%ld checks, %ld violations; K3 h=x^2 gives (%.6g, %.6g)", checks, violations, k3.lhs, k3.rhs)};
}

// 9. centralized baseline
Outcome centralized() {
  const auto c = quartic_spread_cost();
  double oracle = INFINITY;
  const int points = 100000;
  for (int i = 0; i < points; ++i) {
    const double t = 0.1 + 1.8 * i / (points - 1);
    oracle = std::min(oracle, cost_trace_form(WeightedGraph(3, {{0, 1}, {1, 2}}, {t, 2.0 - t}), c));
  }
  const auto p3 = centralized_optimize(fixtures::path(3), c, centralized_defaults());
  const double rel = std::abs(p3.record.jd - oracle) / std::abs(oracle);
  const auto k3 = centralized_optimize(fixtures::k3(), c, centralized_defaults());
  return {rel <= 1e-4 && k3.record.jd == 288.0,
          fmt("P3 J*=%.10g vs grid %.10g (rel %.2g, tol 1e-4); K3 J*=%.10g", p3.record.jd, oracle, rel,
              k3.record.jd)};
}

struct DeskScale {
  CompareReport report;
  std::vector<std::pair<RunResult, RunResult>> runs;  // (cold, warm) per graph
  double seconds = 0.0;
};

DeskScale desk_scale() {
  const auto t0 = Clock::now();
  DeskScale out;
  io::Json manifest;
  manifest["entries"] = io::Json::array();
  for (int seed = 1; seed <= 25; ++seed) {
    manifest["entries"].push_back({{"generate", {{"n", 150}, {"radius", 0.16}, {"seed", seed}}}});
  }
  const auto m = manifest_from_json(manifest);
  out.report = run_compare(m, {RunMode::kCold, RunMode::kWarm, RunMode::kCentralized}, thread_budget());
  out.seconds = seconds_since(t0);
  return out;
}

// 4. feasibility every outer iteration of full-size runs
Outcome feasibility() {
  const auto c = quartic_spread_cost();
  double worst_residual = 0.0, min_weight = INFINITY;
  int rows = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto g = generate_geometric(150, 0.16, seed);
    const double w = g.total_weight();
    for (RunMode mode : {RunMode::kCold, RunMode::kWarm}) {
      RunConfig cfg;
      cfg.mode = mode;
      cfg.seed = seed;
      const auto r = run(g, c, cfg);
      for (const auto& row : r.log) {
        worst_residual = std::max(worst_residual, row.budget_residual / w);
        min_weight = std::min(min_weight, row.min_weight);
        ++rows;
      }
      const double final_sum = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
      worst_residual = std::max(worst_residual, std::abs(final_sum - w) / w);
      min_weight = std::min(min_weight, *std::min_element(r.weights.begin(), r.weights.end()));
    }
  }
  return {worst_residual <= 1e-9 && min_weight >= 0.1 && rows == 3 * 2 * 200,
          fmt("%d iterations over 6 runs, worst budget residual %.3g W (tol 1e-9), min weight %.17g", rows,
              worst_residual, min_weight)};
}

// 10. determinism of curve CSVs
Outcome determinism() {
  const auto c = quartic_spread_cost();
  const auto g = generate_geometric(150, 0.16, 10);
  bool same = true;
  for (RunMode mode : {RunMode::kCold, RunMode::kWarm}) {
    RunConfig cfg;
    cfg.mode = mode;
    cfg.seed = 10;
    std::ostringstream a, b;
    io::write_curve_csv(a, run(g, c, cfg).curve);
    io::write_curve_csv(b, run(g, c, cfg).curve);
    same = same && a.str() == b.str() && !a.str().empty();
  }
  return {same, same ? "cold and warm curve CSVs identical across two runs" : "curve CSVs differ"};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.insert(std::stoi(part));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, allowed;
  std::string csv_path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = parse_list(argv[++i]);
    } else if (arg == "--allow-fail" && i + 1 < argc) {
      allowed = parse_list(argv[++i]);
    } else if (arg == "--csv" && i + 1 < argc) {
      csv_path = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--only N,..] [--allow-fail N,..] [--csv FILE]\n";
      return 2;
    }
  }
  const auto want = [&](int k) { return only.empty() || only.count(k) > 0; };

  int failures = 0, allowed_failures = 0;
  const auto report = [&](int k, const char* title, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << k << "] " << title << ": " << o.detail;
    if (!o.pass && allowed.count(k)) {
      std::cout << " (known failure, allowed)";
      ++allowed_failures;
    } else if (!o.pass) {
      ++failures;
    }
    std::cout << std::endl;
  };

  if (want(1)) report(1, "bilinear form", bilinear_form());
  if (want(2)) report(2, "gradient oracle", gradient_oracle());
  if (want(3)) report(3, "locality", locality());
  if (want(4)) report(4, "feasibility", feasibility());
  if (want(5)) report(5, "gossip contraction", gossip_contraction());
  if (want(6)) report(6, "surrogate bound", surrogate());

  if (want(7) || want(8)) {
    const auto desk = desk_scale();
    const auto& rep = desk.report;
    if (!csv_path.empty()) {
      std::ofstream out(csv_path);
      write_compare_csv(out, rep);
    }
    double cold = NAN, warm = NAN;
    for (const auto& s : rep.modes) {
      if (s.mode == "cold") cold = s.mean_dopr;
      if (s.mode == "warm") warm = s.mean_dopr;
    }
    if (want(7)) {
      report(7, "desk-scale DOPR",
             {cold >= 0.6 && warm >= cold && desk.seconds < 1800.0,
              fmt("25 graphs n=150 r=0.16, mean DOPR cold %.6f (min 0.6), warm %.6f (must be >= cold); %.1fs",
                  cold, warm, desk.seconds)});
    }
    if (want(8)) {
      const double frac = rep.warm_ge_cold.value_or(0.0);
      report(8, "warm vs cold dominance",
             {frac >= 0.8 && rep.paired == 25,
              fmt("warm >= cold on %d of %d graphs (%.0f%%, need 80%%)",
                  static_cast<int>(std::lround(frac * rep.paired)), rep.paired, 100.0 * frac)});
    }
  }

  if (want(9)) report(9, "centralized baseline", centralized());
  if (want(10)) report(10, "determinism", determinism());

  std::cout << "summary: " << failures + allowed_failures << " failed";
  if (allowed_failures > 0) std::cout << " (" << allowed_failures << " allowed)";
  std::cout << std::endl;
  return failures == 0 ? 0 : 1;
}
