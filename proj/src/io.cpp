#include "spectune/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "spectune/errors.hpp"

namespace spectune::io {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

Json nullable(const std::optional<double>& x) {
  return x ? Json(*x) : Json(nullptr);
}

std::optional<double> optional_double(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

Json graph_to_json(const WeightedGraph& g) {
  Json j;
  j["n"] = g.num_vertices();
  if (g.coords()) {
    Json coords = Json::array();
    for (const auto& p : *g.coords()) coords.push_back({p.x, p.y});
    j["coords"] = std::move(coords);
  } else {
    j["coords"] = nullptr;
  }
  Json edges = Json::array();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    edges.push_back({g.edge(e).u, g.edge(e).v, g.weight(e)});
  }
  j["edges"] = std::move(edges);
  return j;
}

WeightedGraph graph_from_json(const Json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    std::vector<double> weights;
    for (const auto& row : j.at("edges")) {
      if (!row.is_array() || row.size() != 3) throw ParseError("edge rows must be [u, v, w]");
      edges.push_back({row[0].get<int>(), row[1].get<int>()});
      weights.push_back(row[2].get<double>());
    }
    std::optional<std::vector<Point2>> coords;
    if (j.contains("coords") && !j.at("coords").is_null()) {
      coords.emplace();
      for (const auto& p : j.at("coords")) {
        if (!p.is_array() || p.size() != 2) throw ParseError("coords rows must be [x, y]");
        coords->push_back({p[0].get<double>(), p[1].get<double>()});
      }
    }
    return WeightedGraph(n, std::move(edges), std::move(weights), std::move(coords));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad graph json: ") + e.what());
  }
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_graph(const std::filesystem::path& path, const WeightedGraph& g) {
  write_json(path, graph_to_json(g));
}

WeightedGraph read_graph(const std::filesystem::path& path) {
  return graph_from_json(read_json(path));
}

Json cost_to_json(const CoefficientMatrix& c) {
  Json rows = Json::array();
  for (Eigen::Index p = 0; p < c.raw().rows(); ++p) {
    Json row = Json::array();
    for (Eigen::Index q = 0; q < c.raw().cols(); ++q) row.push_back(c.raw()(p, q));
    rows.push_back(std::move(row));
  }
  return Json{{"monomial", std::move(rows)}};
}

CoefficientMatrix cost_from_json(const Json& j) {
  try {
    if (j.contains("monomial")) {
      const auto& rows = j.at("monomial");
      const auto n = static_cast<Eigen::Index>(rows.size());
      Eigen::MatrixXd m(n, n);
      for (Eigen::Index p = 0; p < n; ++p) {
        const auto& row = rows.at(static_cast<size_t>(p));
        if (static_cast<Eigen::Index>(row.size()) != n) {
          throw ParseError("monomial matrix must be square");
        }
        for (Eigen::Index q = 0; q < n; ++q) m(p, q) = row.at(static_cast<size_t>(q)).get<double>();
      }
      return CoefficientMatrix(std::move(m));
    }
    if (j.contains("eigendiff")) {
      std::map<int, double> coeffs;
      for (const auto& [key, value] : j.at("eigendiff").items()) {
        std::size_t used = 0;
        int k = 0;
        try {
          k = std::stoi(key, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != key.size()) throw ParseError("eigendiff keys must be integers: " + key);
        coeffs[k] = value.get<double>();
      }
      return expand_eigendifference(coeffs);
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad cost json: ") + e.what());
  }
  throw ParseError("cost json needs a 'monomial' or 'eigendiff' key");
}

CoefficientMatrix read_cost(const std::filesystem::path& path) {
  return cost_from_json(read_json(path));
}

void write_cost(const std::filesystem::path& path, const CoefficientMatrix& c) {
  write_json(path, cost_to_json(c));
}

Json alignment_to_json(const AlignmentReport& r) {
  Json j;
  j["edge_count"] = r.edge_count;
  j["sigma"] = r.sigma;
  // JSON has no infinity
  j["ratio"] = std::isfinite(r.ratio) ? Json(r.ratio) : Json(nullptr);
  j["axis"] = r.axis;
  j["overlap"] = r.overlap;
  j["pass"] = r.pass;
  return j;
}

Json iteration_to_json(const IterationLog& log) {
  Json j;
  j["iter"] = log.iter;
  j["phase"] = log.phase;
  j["J"] = nullable(log.cost);
  j["workers"] = log.workers;
  j["accepted"] = log.accepted;
  j["skipped_align"] = log.skipped_align;
  j["skipped_core"] = log.skipped_core;
  j["align_pass"] = log.align_pass;
  j["align_fail"] = log.align_fail;
  j["budget_residual"] = log.budget_residual;
  j["min_weight"] = log.min_weight;
  j["epoch"] = log.epoch;
  j["seconds"] = log.seconds;
  Json reports = Json::array();
  for (const auto& r : log.alignment) reports.push_back(alignment_to_json(r));
  j["alignment"] = std::move(reports);
  return j;
}

void write_run_log(std::ostream& os, const std::vector<IterationLog>& log) {
  for (const auto& row : log) os << iteration_to_json(row).dump() << '\n';
}

void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve) {
  os << "iter,J,phase\n";
  for (const auto& p : curve) os << p.iter << ',' << format_double(p.cost) << ',' << p.phase << '\n';
}

std::vector<CurveRow> read_curve_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "iter,J,phase") throw ParseError("bad curve header");
  std::vector<CurveRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw ParseError("bad curve row: " + line);
    CurveRow r;
    const auto a = std::from_chars(line.data(), line.data() + c1, r.iter);
    const auto b = std::from_chars(line.data() + c1 + 1, line.data() + c2, r.cost);
    if (a.ec != std::errc() || b.ec != std::errc()) throw ParseError("bad curve row: " + line);
    r.phase = line.substr(c2 + 1);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_descent_csv(std::ostream& os, const DescentRecord& rec) {
  os << "step,J,step_size,pg_norm\n";
  for (const auto& s : rec.steps) {
    os << s.step << ',' << format_double(s.cost) << ',' << format_double(s.step_size) << ','
       << format_double(s.pg_norm) << '\n';
  }
}

Summary summary_of(const RunResult& r) {
  return Summary{r.j0, r.jd, r.jstar, r.dopr, r.dopr_note};
}

Json summary_to_json(const Summary& s) {
  Json j;
  j["J0"] = s.j0;
  j["Jd"] = s.jd;
  j["Jstar"] = nullable(s.jstar);
  j["dopr"] = nullable(s.dopr);
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

Summary summary_from_json(const Json& j) {
  try {
    Summary s;
    s.j0 = j.at("J0").get<double>();
    s.jd = j.at("Jd").get<double>();
    s.jstar = optional_double(j, "Jstar");
    s.dopr = optional_double(j, "dopr");
    if (j.contains("note")) s.note = j.at("note").get<std::string>();
    return s;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad summary json: ") + e.what());
  }
}

void write_regularize_csv(std::ostream& os, const std::vector<RegularizeTraceRow>& rows) {
  os << "iter,degree_dispersion,total_weight\n";
  for (const auto& r : rows) {
    os << r.iter << ',' << format_double(r.degree_dispersion) << ','
       << format_double(r.total_weight) << '\n';
  }
}

void write_gossip_csv(std::ostream& os, const std::vector<GossipTraceRow>& rows) {
  os << "round,znorm2,bound\n";
  for (const auto& r : rows) {
    os << r.round << ',' << format_double(r.znorm2) << ',' << format_double(r.bound) << '\n';
  }
}

}  // namespace spectune::io
