#include "spectune/experiment.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "spectune/errors.hpp"
#include "spectune/parallel.hpp"

namespace spectune {

namespace {

template <typename T>
void maybe_get(const io::Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig run_config_from_json(const io::Json& j, RunConfig cfg) {
  try {
    if (j.contains("mode")) cfg.mode = parse_run_mode(j.at("mode").get<std::string>());
    maybe_get(j, "workers", cfg.workers);
    maybe_get(j, "iterations", cfg.iterations);
    maybe_get(j, "warm_split", cfg.warm_split);
    maybe_get(j, "gossip_draws", cfg.gossip_draws);
    maybe_get(j, "reinit_estimates", cfg.reinit_estimates);
    maybe_get(j, "tau_dom", cfg.tau_dom);
    maybe_get(j, "tau_axis", cfg.tau_axis);
    maybe_get(j, "seed", cfg.seed);
    maybe_get(j, "eval_every", cfg.eval_every);
    maybe_get(j, "threads", cfg.threads);
    maybe_get(j, "inner_steps", cfg.descent.max_steps);
    maybe_get(j, "floor", cfg.descent.floor);
    cfg.centralized.floor = cfg.descent.floor;
    maybe_get(j, "centralized_steps", cfg.centralized.max_steps);
    if (j.contains("scheduling")) {
      const auto s = j.at("scheduling").get<std::string>();
      if (s == "deterministic") {
        cfg.scheduling = Scheduling::kDeterministic;
      } else if (s == "free") {
        cfg.scheduling = Scheduling::kFree;
      } else {
        throw ParseError("unknown scheduling '" + s + "'");
      }
    }
  } catch (const io::Json::exception& e) {
    throw ParseError(std::string("bad run config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentManifest manifest_from_json(const io::Json& j, const std::filesystem::path& base_dir) {
  ExperimentManifest m;
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  try {
    const RunConfig defaults = j.contains("config") ? run_config_from_json(j.at("config")) : RunConfig{};
    if (j.contains("output_dir")) m.output_dir = resolve(j.at("output_dir").get<std::string>());
    if (!j.contains("entries") || !j.at("entries").is_array() || j.at("entries").empty()) {
      throw ParseError("manifest has no entries");
    }
    for (const auto& row : j.at("entries")) {
      ManifestEntry e;
      e.config = row.contains("config") ? run_config_from_json(row.at("config"), defaults) : defaults;
      if (row.contains("graph")) {
        e.graph_file = resolve(row.at("graph").get<std::string>());
        e.name = row.at("graph").get<std::string>();
      } else if (row.contains("generate")) {
        const auto& gj = row.at("generate");
        GenerateSpec gs;
        maybe_get(gj, "n", gs.n);
        maybe_get(gj, "radius", gs.radius);
        maybe_get(gj, "seed", gs.seed);
        e.generate = gs;
        e.name = "geometric-n" + std::to_string(gs.n) + "-r" + io::format_double(gs.radius) +
                 "-s" + std::to_string(gs.seed);
        if (!row.contains("config") || !row.at("config").contains("seed")) e.config.seed = gs.seed;
      } else {
        throw ParseError("manifest entry needs 'graph' or 'generate'");
      }
      if (row.contains("name")) e.name = row.at("name").get<std::string>();
      if (row.contains("cost")) e.cost_file = resolve(row.at("cost").get<std::string>());
      m.entries.push_back(std::move(e));
    }
    if (j.contains("baseline")) {
      const auto& b = j.at("baseline");
      if (b.is_string() && b.get<std::string>() == "compute") {
        m.baseline = BaselinePolicy::kCompute;
      } else if (b.is_object() && b.contains("cached")) {
        m.baseline = BaselinePolicy::kCached;
        const auto cache = io::read_json(resolve(b.at("cached").get<std::string>()));
        for (const auto& [name, value] : cache.items()) m.cached_baselines[name] = value.get<double>();
      } else {
        throw ParseError("baseline must be \"compute\" or {\"cached\": file}");
      }
    }
  } catch (const io::Json::exception& e) {
    throw ParseError(std::string("bad manifest: ") + e.what());
  }
  return m;
}

ExperimentManifest read_manifest(const std::filesystem::path& path) {
  return manifest_from_json(io::read_json(path), path.parent_path());
}

WeightedGraph load_graph(const ManifestEntry& e) {
  if (e.graph_file) return io::read_graph(*e.graph_file);
  return generate_geometric(e.generate->n, e.generate->radius, e.generate->seed);
}

CoefficientMatrix load_cost(const ManifestEntry& e) {
  return e.cost_file ? io::read_cost(*e.cost_file) : quartic_spread_cost();
}

namespace {

CompareRow row_of(const ManifestEntry& e, RunMode mode, const RunResult& r) {
  return CompareRow{e.name, to_string(mode), e.config.seed, r.j0, r.jd, r.jstar, r.dopr, r.dopr_note};
}

std::vector<CompareRow> compare_entry(const ExperimentManifest& m, const ManifestEntry& e,
                                      const std::vector<RunMode>& modes, int inner_threads) {
  const WeightedGraph g = load_graph(e);
  const CoefficientMatrix c = load_cost(e);
  RunConfig cfg = e.config;
  if (inner_threads > 0) cfg.threads = inner_threads;

  std::optional<RunResult> central;
  double jstar = 0.0;
  if (m.baseline == BaselinePolicy::kCompute) {
    central = run_centralized(g, c, cfg);
    jstar = central->jd;
  } else {
    const auto it = m.cached_baselines.find(e.name);
    if (it == m.cached_baselines.end()) throw ParseError("no cached baseline for " + e.name);
    jstar = it->second;
  }

  std::vector<CompareRow> rows;
  for (RunMode mode : modes) {
    RunResult r = (mode == RunMode::kCentralized && central) ? *central : [&] {
      RunConfig mc = cfg;
      mc.mode = mode;
      return run(g, c, mc);
    }();
    attach_baseline(r, jstar);
    rows.push_back(row_of(e, mode, r));
  }
  return rows;
}

}  // namespace

CompareReport run_compare(const ExperimentManifest& m, const std::vector<RunMode>& modes,
                          int threads) {
  if (m.entries.empty()) throw ParseError("manifest has no entries");
  if (modes.empty()) throw InvalidParam("no modes requested");
  std::vector<std::vector<CompareRow>> per_entry(m.entries.size());
  const int outer = std::max(1, threads);
  parallel_for(
      static_cast<int>(m.entries.size()),
      [&](int i) {
        per_entry[static_cast<size_t>(i)] =
            compare_entry(m, m.entries[static_cast<size_t>(i)], modes, outer > 1 ? 1 : 0);
      },
      outer);

  CompareReport out;
  // pair before the rows are moved out
  int wins = 0;
  for (const auto& rows : per_entry) {
    std::optional<double> cold, warm;
    for (const auto& r : rows) {
      if (r.mode == "cold") cold = r.dopr;
      if (r.mode == "warm") warm = r.dopr;
    }
    if (cold && warm) {
      ++out.paired;
      if (*warm >= *cold) ++wins;
    }
  }
  for (auto& rows : per_entry) {
    for (auto& r : rows) out.rows.push_back(std::move(r));
  }
  for (RunMode mode : modes) {
    ModeSummary s{to_string(mode), 0, 0.0};
    for (const auto& r : out.rows) {
      if (r.mode == s.mode && r.dopr) {
        ++s.count;
        s.mean_dopr += *r.dopr;
      }
    }
    if (s.count > 0) s.mean_dopr /= s.count;
    out.modes.push_back(s);
  }
  if (out.paired > 0) out.warm_ge_cold = static_cast<double>(wins) / out.paired;
  return out;
}

void write_compare_csv(std::ostream& os, const CompareReport& r) {
  const auto opt = [](const std::optional<double>& x) { return x ? io::format_double(*x) : std::string(); };
  os << "graph,mode,seed,J0,Jd,Jstar,dopr\n";
  for (const auto& row : r.rows) {
    os << row.graph << ',' << row.mode << ',' << row.seed << ',' << io::format_double(row.j0) << ','
       << io::format_double(row.jd) << ',' << opt(row.jstar) << ',' << opt(row.dopr) << '\n';
  }
}

io::Json compare_summary_json(const CompareReport& r) {
  io::Json j;
  io::Json modes = io::Json::object();
  for (const auto& s : r.modes) {
    modes[s.mode] = {{"count", s.count},
                     {"mean_dopr", s.count > 0 ? io::Json(s.mean_dopr) : io::Json(nullptr)}};
  }
  j["modes"] = std::move(modes);
  j["paired"] = r.paired;
  j["warm_ge_cold_fraction"] = r.warm_ge_cold ? io::Json(*r.warm_ge_cold) : io::Json(nullptr);
  return j;
}

}  // namespace spectune
