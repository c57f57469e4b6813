#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectune/feasible_descent.hpp"
#include "spectune/gossip.hpp"
#include "spectune/graph.hpp"
#include "spectune/local_gradient.hpp"
#include "spectune/orchestrator.hpp"
#include "spectune/spectral_cost.hpp"

namespace spectune::io {

using Json = nlohmann::json;

/// Shortest text that parses back to the same double.
std::string format_double(double x);

// Graph file: {"n": int, "coords": [[x,y],...] | null, "edges": [[u,v,w],...]}.
Json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const Json& j);
void write_graph(const std::filesystem::path& path, const WeightedGraph& g);
WeightedGraph read_graph(const std::filesystem::path& path);

// Cost file: {"monomial": [[...],...]} or {"eigendiff": {"2": -1.0, "4": 1.0}}.
Json cost_to_json(const CoefficientMatrix& c);
CoefficientMatrix cost_from_json(const Json& j);
CoefficientMatrix read_cost(const std::filesystem::path& path);
void write_cost(const std::filesystem::path& path, const CoefficientMatrix& c);

Json alignment_to_json(const AlignmentReport& r);

/// One JSON object per outer iteration.
Json iteration_to_json(const IterationLog& log);
void write_run_log(std::ostream& os, const std::vector<IterationLog>& log);

struct CurveRow {
  int iter = 0;
  double cost = 0.0;
  std::string phase;
  bool operator==(const CurveRow&) const = default;
};
void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve);
std::vector<CurveRow> read_curve_csv(std::istream& is);

void write_descent_csv(std::ostream& os, const DescentRecord& rec);

struct Summary {
  double j0 = 0.0;
  double jd = 0.0;
  std::optional<double> jstar;
  std::optional<double> dopr;
  std::string note;
  bool operator==(const Summary&) const = default;
};
Summary summary_of(const RunResult& r);
Json summary_to_json(const Summary& s);
Summary summary_from_json(const Json& j);

void write_regularize_csv(std::ostream& os, const std::vector<RegularizeTraceRow>& rows);
void write_gossip_csv(std::ostream& os, const std::vector<GossipTraceRow>& rows);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace spectune::io
