#pragma once

#include <random>
#include <vector>

#include "spectune/graph.hpp"

namespace fixtures {

using spectune::Edge;
using spectune::WeightedGraph;

inline WeightedGraph path(int n, double w = 1.0) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return WeightedGraph(n, edges, std::vector<double>(edges.size(), w));
}

inline WeightedGraph complete(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return WeightedGraph::with_unit_weights(n, edges);
}

inline WeightedGraph k3() { return complete(3); }

/// Random spanning tree plus each remaining pair with probability p.
inline WeightedGraph random_connected(int n, double p, std::mt19937_64& rng, double wlo = 0.1,
                                      double whi = 2.0, bool unit = false) {
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> have(n, std::vector<bool>(n, false));
  for (int v = 1; v < n; ++v) {
    const int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
    edges.push_back({u, v});
    have[u][v] = true;
  }
  std::bernoulli_distribution coin(p);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!have[i][j] && coin(rng)) edges.push_back({i, j});
    }
  }
  std::uniform_real_distribution<double> wd(wlo, whi);
  std::vector<double> w(edges.size(), 1.0);
  if (!unit) {
    for (auto& x : w) x = wd(rng);
  }
  return WeightedGraph(n, edges, w);
}

}  // namespace fixtures
