#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spectune/errors.hpp"
#include "spectune/graph.hpp"
#include "spectune/io.hpp"
#include "spectune/orchestrator.hpp"
#include "spectune/spectral_cost.hpp"

namespace py = pybind11;
using namespace spectune;

namespace {

std::vector<Edge> to_edges(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> out;
  out.reserve(pairs.size());
  for (auto [u, v] : pairs) out.push_back({u, v});
  return out;
}

std::vector<std::pair<int, int>> edge_pairs(const WeightedGraph& g) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : g.edges()) out.emplace_back(e.u, e.v);
  return out;
}

RunConfig make_config(const std::string& mode, int iterations, int workers, std::uint64_t seed,
                      double warm_split, int gossip_draws, int eval_every, int threads) {
  RunConfig cfg;
  cfg.mode = parse_run_mode(mode);
  cfg.iterations = iterations;
  cfg.workers = workers;
  cfg.seed = seed;
  cfg.warm_split = warm_split;
  cfg.gossip_draws = gossip_draws;
  cfg.eval_every = eval_every;
  cfg.threads = threads;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral edge-weight tuning";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<WeightedGraph>(m, "Graph")
      .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges,
                       std::optional<std::vector<double>> weights) {
             if (!weights) return WeightedGraph::with_unit_weights(n, to_edges(edges));
             return WeightedGraph(n, to_edges(edges), *weights);
           }),
           py::arg("n"), py::arg("edges"), py::arg("weights") = py::none())
      .def_property_readonly("num_vertices", &WeightedGraph::num_vertices)
      .def_property_readonly("num_edges", &WeightedGraph::num_edges)
      .def_property_readonly("edges", &edge_pairs)
      .def_property_readonly("weights",
                             [](const WeightedGraph& g) {
                               return std::vector<double>(g.weights().begin(), g.weights().end());
                             })
      .def("total_weight", &WeightedGraph::total_weight)
      .def("weighted_degrees", &WeightedGraph::weighted_degrees)
      .def("with_weights",
           [](const WeightedGraph& g, std::vector<double> w) {
             return WeightedGraph(g.num_vertices(), g.edges(), std::move(w), g.coords());
           })
      .def("to_json", [](const WeightedGraph& g) { return io::graph_to_json(g).dump(); })
      .def_static("from_json",
                  [](const std::string& s) { return io::graph_from_json(io::Json::parse(s)); });

  py::class_<CoefficientMatrix>(m, "CostMatrix")
      .def(py::init<Eigen::MatrixXd>())
      .def_property_readonly("raw", &CoefficientMatrix::raw)
      .def_property_readonly("degree", &CoefficientMatrix::degree)
      .def("evaluate", &CoefficientMatrix::evaluate);

  m.def("generate_geometric", &generate_geometric, py::arg("n"), py::arg("radius"),
        py::arg("seed") = 0, py::arg("max_retries") = 100);
  m.def("laplacian", &laplacian);
  m.def("laplacian_spectrum", &laplacian_spectrum);
  m.def("quartic_spread_cost", &quartic_spread_cost);
  m.def("expand_eigendifference", &expand_eigendifference);
  m.def("cost", &cost_trace_form, py::arg("graph"), py::arg("c"));

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("weights", &RunResult::weights)
      .def_readonly("j0", &RunResult::j0)
      .def_readonly("jd", &RunResult::jd)
      .def_readonly("jstar", &RunResult::jstar)
      .def_readonly("dopr", &RunResult::dopr)
      .def_readonly("dopr_note", &RunResult::dopr_note)
      .def_readonly("phase_boundary", &RunResult::phase_boundary)
      .def_readonly("epochs", &RunResult::epochs)
      .def_property_readonly("curve", [](const RunResult& r) {
        std::vector<std::tuple<int, double, std::string>> out;
        for (const auto& p : r.curve) out.emplace_back(p.iter, p.cost, p.phase);
        return out;
      });

  m.def(
      "run",
      [](const WeightedGraph& g, const CoefficientMatrix& c, const std::string& mode, int iterations,
         int workers, std::uint64_t seed, double warm_split, int gossip_draws, int eval_every,
         int threads) {
        const RunConfig cfg =
            make_config(mode, iterations, workers, seed, warm_split, gossip_draws, eval_every, threads);
        py::gil_scoped_release release;
        return run(g, c, cfg);
      },
      py::arg("graph"), py::arg("c"), py::arg("mode") = "cold", py::arg("iterations") = 200,
      py::arg("workers") = 8, py::arg("seed") = 0, py::arg("warm_split") = 0.5,
      py::arg("gossip_draws") = 10000, py::arg("eval_every") = 1, py::arg("threads") = 0);
  m.def("attach_baseline", [](RunResult r, double jstar) {
    attach_baseline(r, jstar);
    return r;
  });
}
