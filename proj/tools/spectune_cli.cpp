#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spectune/errors.hpp"
#include "spectune/experiment.hpp"
#include "spectune/gossip.hpp"
#include "spectune/io.hpp"
#include "spectune/orchestrator.hpp"
#include "spectune/parallel.hpp"

using namespace spectune;

namespace {

// 0 success, 1 usage/config, 2 environment/generation failure
constexpr int kUsage = 1;
constexpr int kEnvironment = 2;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  return out;
}

int cmd_generate(int n, double radius, std::uint64_t seed, const std::string& out) {
  if (n < 2) {
    std::cerr << "error: --n must be at least 2\n";
    return kUsage;
  }
  if (!(radius > 0.0)) {
    std::cerr << "error: --radius must be positive\n";
    return kUsage;
  }
  try {
    const WeightedGraph g = generate_geometric(n, radius, seed);
    io::write_graph(out, g);
    std::printf("n=%d edges=%d avg_degree=%.6g lambda2=%.6g\n", g.num_vertices(), g.num_edges(),
                2.0 * g.num_edges() / g.num_vertices(), algebraic_connectivity(g));
  } catch (const ConnectivityFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironment;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironment;
  }
  return 0;
}

struct OptimizeArgs {
  std::string graph, cost, mode = "cold", prefix = "run", scheduling = "deterministic";
  int iters = 200, workers = 8, draws = 10000, eval_every = 1, threads = 0;
  double split = 0.5;
  std::uint64_t seed = 0;
  std::optional<double> baseline;
  bool compute_baseline = false;
};

int cmd_optimize(const OptimizeArgs& a) {
  RunConfig cfg;
  cfg.mode = parse_run_mode(a.mode);
  cfg.iterations = a.iters;
  cfg.workers = a.workers;
  cfg.seed = a.seed;
  cfg.warm_split = a.split;
  cfg.gossip_draws = a.draws;
  cfg.eval_every = a.eval_every;
  cfg.threads = a.threads;
  cfg.scheduling = a.scheduling == "free" ? Scheduling::kFree : Scheduling::kDeterministic;
  cfg.validate();

  const WeightedGraph g = io::read_graph(a.graph);
  const CoefficientMatrix c = a.cost.empty() ? quartic_spread_cost() : io::read_cost(a.cost);
  RunResult r = run(g, c, cfg);

  if (a.baseline) {
    attach_baseline(r, *a.baseline);
  } else if (cfg.mode == RunMode::kCentralized) {
    attach_baseline(r, r.jd);
  } else if (a.compute_baseline) {
    attach_baseline(r, run_centralized(g, c, cfg).jd);
  } else {
    r.dopr_note = "no baseline";
  }

  const WeightedGraph out_graph(g.num_vertices(), g.edges(), r.weights, g.coords());
  io::write_graph(a.prefix + "_graph.json", out_graph);
  {
    auto out = open_out(a.prefix + "_curve.csv");
    io::write_curve_csv(out, r.curve);
  }
  {
    auto out = open_out(a.prefix + "_log.jsonl");
    io::write_run_log(out, r.log);
  }
  io::write_json(a.prefix + "_summary.json", io::summary_to_json(io::summary_of(r)));
  if (r.centralized_record) {
    auto out = open_out(a.prefix + "_descent.csv");
    io::write_descent_csv(out, *r.centralized_record);
  }
  if (!r.regularize_trace.empty()) {
    auto reg = open_out(a.prefix + "_regularize.csv");
    io::write_regularize_csv(reg, r.regularize_trace);
    auto gos = open_out(a.prefix + "_gossip.csv");
    io::write_gossip_csv(gos, r.gossip_trace);
  }
  std::cout << io::summary_to_json(io::summary_of(r)).dump() << '\n';
  return 0;
}

int cmd_compare(const std::string& manifest_path, const std::vector<std::string>& mode_names,
                const std::string& out_dir_flag, int threads) {
  const ExperimentManifest m = read_manifest(manifest_path);
  std::vector<RunMode> modes;
  for (const auto& name : mode_names) {
    // accept both "--modes cold warm" and "--modes cold,warm"
    std::stringstream ss(name);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) modes.push_back(parse_run_mode(part));
    }
  }
  if (modes.empty()) throw InvalidParam("no modes given");
  const CompareReport report = run_compare(m, modes, threads > 0 ? threads : thread_budget());

  const std::filesystem::path dir = out_dir_flag.empty() ? m.output_dir : std::filesystem::path(out_dir_flag);
  std::filesystem::create_directories(dir);
  {
    auto out = open_out((dir / "compare.csv").string());
    write_compare_csv(out, report);
  }
  const auto summary = compare_summary_json(report);
  io::write_json(dir / "compare_summary.json", summary);
  std::cout << summary.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral edge-weight tuning on graphs"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Sample a connected random geometric graph");
  int gen_n = 0;
  double gen_radius = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Number of vertices")->required();
  gen->add_option("--radius", gen_radius, "Connection radius")->required();
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "Output graph JSON")->required();

  auto* opt = app.add_subcommand("optimize", "Run one pipeline on a graph");
  OptimizeArgs oa;
  opt->add_option("--graph", oa.graph, "Graph JSON")->required();
  opt->add_option("--cost", oa.cost, "Cost JSON (default: quartic spread)");
  opt->add_option("--mode", oa.mode, "cold|warm|centralized|regularize")
      ->check(CLI::IsMember({"cold", "warm", "centralized", "regularize"}));
  opt->add_option("--iters", oa.iters, "Outer iterations");
  opt->add_option("--workers", oa.workers, "Parallel workers per iteration");
  opt->add_option("--seed", oa.seed, "RNG seed");
  opt->add_option("--out-prefix", oa.prefix, "Prefix for output files");
  opt->add_option("--baseline", oa.baseline, "Cached centralized J*");
  opt->add_flag("--compute-baseline", oa.compute_baseline, "Run the centralized baseline too");
  opt->add_option("--split", oa.split, "Warm-start regularization fraction");
  opt->add_option("--gossip-draws", oa.draws, "Gossip draws per iteration");
  opt->add_option("--eval-every", oa.eval_every, "Global J cadence");
  opt->add_option("--threads", oa.threads, "Worker threads (default: SPECWEAVE_THREADS)");
  opt->add_option("--scheduling", oa.scheduling, "deterministic|free")
      ->check(CLI::IsMember({"deterministic", "free"}));

  auto* cmp = app.add_subcommand("compare", "Run several modes over a manifest of graphs");
  std::string manifest, cmp_out;
  std::vector<std::string> cmp_modes{"cold", "warm"};
  int cmp_threads = 0;
  cmp->add_option("--manifest", manifest, "Manifest JSON")->required();
  cmp->add_option("--modes", cmp_modes, "Modes to run");
  cmp->add_option("--out", cmp_out, "Output directory (default: manifest output_dir)");
  cmp->add_option("--threads", cmp_threads, "Entries run concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_n, gen_radius, gen_seed, gen_out);
    if (*opt) return cmd_optimize(oa);
    if (*cmp) return cmd_compare(manifest, cmp_modes, cmp_out, cmp_threads);
  } catch (const ConnectivityFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironment;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
