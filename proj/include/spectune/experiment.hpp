#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectune/io.hpp"
#include "spectune/orchestrator.hpp"

namespace spectune {

struct GenerateSpec {
  int n = 150;
  double radius = 0.16;
  std::uint64_t seed = 0;
};

struct ManifestEntry {
  std::string name;
  std::optional<std::filesystem::path> graph_file;
  std::optional<GenerateSpec> generate;
  std::optional<std::filesystem::path> cost_file;  // default: quartic spread cost
  RunConfig config;
};

enum class BaselinePolicy { kCompute, kCached };

struct ExperimentManifest {
  std::vector<ManifestEntry> entries;
  std::filesystem::path output_dir = ".";
  BaselinePolicy baseline = BaselinePolicy::kCompute;
  std::map<std::string, double> cached_baselines;  // entry name -> J*
};

/// Reads RunConfig overrides from a JSON object onto `base`.
RunConfig run_config_from_json(const io::Json& j, RunConfig base = {});

/// Relative paths resolve against `base_dir`. Throws ParseError on bad
/// input, including an empty entry list.
ExperimentManifest manifest_from_json(const io::Json& j,
                                      const std::filesystem::path& base_dir = ".");
ExperimentManifest read_manifest(const std::filesystem::path& path);

WeightedGraph load_graph(const ManifestEntry& e);
CoefficientMatrix load_cost(const ManifestEntry& e);

struct CompareRow {
  std::string graph;
  std::string mode;
  std::uint64_t seed = 0;
  double j0 = 0.0;
  double jd = 0.0;
  std::optional<double> jstar;
  std::optional<double> dopr;
  std::string note;
};

struct ModeSummary {
  std::string mode;
  int count = 0;       // rows with a defined DOPR
  double mean_dopr = 0.0;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  std::vector<ModeSummary> modes;
  /// Fraction of graphs with warm DOPR >= cold DOPR, when both ran.
  std::optional<double> warm_ge_cold;
  int paired = 0;
};

/// Runs every mode on every entry. The centralized baseline is computed
/// once per entry (or read from the cache) and shared by all modes.
CompareReport run_compare(const ExperimentManifest& m, const std::vector<RunMode>& modes,
                          int threads = 1);

void write_compare_csv(std::ostream& os, const CompareReport& r);
io::Json compare_summary_json(const CompareReport& r);

}  // namespace spectune
