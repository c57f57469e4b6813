#include "spectune/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spectune/errors.hpp"

namespace spectune {

namespace {

void check_weight(double w) {
  if (!std::isfinite(w) || w <= 0.0) {
    throw InvalidParam("edge weights must be finite and positive, got " +
                       std::to_string(w));
  }
}

std::vector<Vertex> sorted_unique(std::vector<Vertex> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges,
                             std::vector<double> weights,
                             std::optional<std::vector<Point2>> coords)
    : n_(n), coords_(std::move(coords)) {
  if (n < 1) throw InvalidParam("graph needs at least one vertex");
  if (edges.size() != weights.size()) {
    throw InvalidParam("edge and weight counts differ");
  }
  if (coords_ && static_cast<int>(coords_->size()) != n) {
    throw InvalidParam("coordinate count differs from vertex count");
  }

  std::vector<std::pair<Edge, double>> tagged;
  tagged.reserve(edges.size());
  for (size_t i = 0; i < edges.size(); ++i) {
    Edge e = edges[i];
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw InvalidParam("edge endpoint out of range");
    }
    if (e.u == e.v) throw InvalidParam("self-loop on vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    check_weight(weights[i]);
    tagged.emplace_back(e, weights[i]);
  }
  std::sort(tagged.begin(), tagged.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < tagged.size(); ++i) {
    if (tagged[i].first == tagged[i - 1].first) {
      throw InvalidParam("duplicate edge (" + std::to_string(tagged[i].first.u) +
                         "," + std::to_string(tagged[i].first.v) + ")");
    }
  }
  edges_.reserve(tagged.size());
  weights_.reserve(tagged.size());
  for (const auto& [e, w] : tagged) {
    edges_.push_back(e);
    weights_.push_back(w);
  }
  if (!is_connected(n_, edges_)) {
    throw ConnectivityFailure("graph is not connected");
  }

  adjacency_.assign(static_cast<size_t>(n_), {});
  for (EdgeId id = 0; id < num_edges(); ++id) {
    const auto& e = edges_[static_cast<size_t>(id)];
    adjacency_[static_cast<size_t>(e.u)].push_back({e.v, id});
    adjacency_[static_cast<size_t>(e.v)].push_back({e.u, id});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Incident& a, const Incident& b) { return a.neighbor < b.neighbor; });
  }
}

WeightedGraph WeightedGraph::with_unit_weights(int n, std::vector<Edge> edges) {
  std::vector<double> w(edges.size(), 1.0);
  return WeightedGraph(n, std::move(edges), std::move(w));
}

double WeightedGraph::total_weight() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

std::optional<EdgeId> WeightedGraph::find_edge(Vertex a, Vertex b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_) return std::nullopt;
  const auto& adj = adjacency_[static_cast<size_t>(a)];
  auto it = std::lower_bound(adj.begin(), adj.end(), b,
                             [](const Incident& x, Vertex key) { return x.neighbor < key; });
  if (it == adj.end() || it->neighbor != b) return std::nullopt;
  return it->edge;
}

Eigen::VectorXd WeightedGraph::weighted_degrees() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
  for (size_t i = 0; i < edges_.size(); ++i) {
    d[edges_[i].u] += weights_[i];
    d[edges_[i].v] += weights_[i];
  }
  return d;
}

void WeightedGraph::set_weights(std::vector<double> weights) {
  if (weights.size() != weights_.size()) {
    throw DimensionMismatch("expected " + std::to_string(weights_.size()) +
                            " weights, got " + std::to_string(weights.size()));
  }
  for (double w : weights) check_weight(w);
  weights_ = std::move(weights);
}

void WeightedGraph::set_weight(EdgeId e, double w) {
  check_weight(w);
  weights_.at(static_cast<size_t>(e)) = w;
}

SubgraphScope whole_graph_scope(const WeightedGraph& g) {
  SubgraphScope s;
  s.vertices.resize(static_cast<size_t>(g.num_vertices()));
  std::iota(s.vertices.begin(), s.vertices.end(), 0);
  s.edges.resize(static_cast<size_t>(g.num_edges()));
  std::iota(s.edges.begin(), s.edges.end(), 0);
  s.core_vertices = s.vertices;
  s.core_edges = s.edges;
  return s;
}

bool is_connected(int n, const std::vector<Edge>& edges) {
  if (n <= 1) return true;
  std::vector<int> parent(static_cast<size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  };
  int components = n;
  for (const auto& e : edges) {
    int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[static_cast<size_t>(a)] = b;
      --components;
    }
  }
  return components == 1;
}

WeightedGraph generate_geometric(int n, double radius, std::uint64_t seed,
                                 int max_retries) {
  if (n < 2) throw InvalidParam("generate_geometric needs n >= 2");
  if (!(radius > 0.0)) throw InvalidParam("generate_geometric needs radius > 0");
  if (max_retries < 1) throw InvalidParam("max_retries must be positive");

  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r2 = radius * radius;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<Point2> pts(static_cast<size_t>(n));
    for (auto& p : pts) {
      p.x = unit(rng);
      p.y = unit(rng);
    }
    std::vector<Edge> edges;
    for (Vertex i = 0; i < n; ++i) {
      for (Vertex j = i + 1; j < n; ++j) {
        const double dx = pts[static_cast<size_t>(i)].x - pts[static_cast<size_t>(j)].x;
        const double dy = pts[static_cast<size_t>(i)].y - pts[static_cast<size_t>(j)].y;
        if (dx * dx + dy * dy < r2) edges.push_back({i, j});
      }
    }
    if (!is_connected(n, edges)) continue;
    std::vector<double> w(edges.size(), 1.0);
    return WeightedGraph(n, std::move(edges), std::move(w), std::move(pts));
  }
  throw ConnectivityFailure("no connected draw after " + std::to_string(max_retries) +
                            " attempts (n=" + std::to_string(n) +
                            ", radius=" + std::to_string(radius) + ")");
}

Eigen::MatrixXd adjacency_matrix(const WeightedGraph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.num_vertices(), g.num_vertices());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edge(e);
    a(ed.u, ed.v) = a(ed.v, ed.u) = g.weight(e);
  }
  return a;
}

Eigen::MatrixXd laplacian(const WeightedGraph& g) {
  Eigen::MatrixXd a = adjacency_matrix(g);
  Eigen::MatrixXd l = -a;
  l.diagonal() = a.rowwise().sum();
  return l;
}

Eigen::SparseMatrix<double> local_laplacian(const WeightedGraph& g,
                                            std::span<const Vertex> vertices,
                                            std::span<const EdgeId> edges) {
  const auto local_index = [&](Vertex v) {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || *it != v) {
      throw InvalidParam("edge endpoint " + std::to_string(v) + " not in vertex set");
    }
    return static_cast<int>(it - vertices.begin());
  };
  const auto n = static_cast<Eigen::Index>(vertices.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(edges.size() * 4);
  for (EdgeId e : edges) {
    const auto& ed = g.edge(e);
    const int a = local_index(ed.u), b = local_index(ed.v);
    const double w = g.weight(e);
    trip.emplace_back(a, a, w);
    trip.emplace_back(b, b, w);
    trip.emplace_back(a, b, -w);
    trip.emplace_back(b, a, -w);
  }
  Eigen::SparseMatrix<double> l(n, n);
  l.setFromTriplets(trip.begin(), trip.end());
  return l;
}

std::vector<int> hop_distances(const WeightedGraph& g,
                               std::span<const Vertex> sources, int max_hops) {
  std::vector<int> dist(static_cast<size_t>(g.num_vertices()), -1);
  std::deque<Vertex> queue;
  for (Vertex s : sources) {
    if (dist[static_cast<size_t>(s)] != 0) {
      dist[static_cast<size_t>(s)] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    const int dv = dist[static_cast<size_t>(v)];
    if (max_hops >= 0 && dv >= max_hops) continue;
    for (const auto& inc : g.incident(v)) {
      if (dist[static_cast<size_t>(inc.neighbor)] < 0) {
        dist[static_cast<size_t>(inc.neighbor)] = dv + 1;
        queue.push_back(inc.neighbor);
      }
    }
  }
  return dist;
}

std::vector<EdgeId> induced_edges(const WeightedGraph& g,
                                  std::span<const Vertex> vertices) {
  std::vector<char> in(static_cast<size_t>(g.num_vertices()), 0);
  for (Vertex v : vertices) in[static_cast<size_t>(v)] = 1;
  std::vector<EdgeId> out;
  for (Vertex v : vertices) {
    for (const auto& inc : g.incident(v)) {
      if (inc.neighbor > v && in[static_cast<size_t>(inc.neighbor)]) out.push_back(inc.edge);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SubgraphScope khop_neighborhood(const WeightedGraph& g, Vertex center, int k) {
  if (center < 0 || center >= g.num_vertices()) {
    throw InvalidParam("center " + std::to_string(center) + " out of range");
  }
  if (k < 0) throw InvalidParam("hop count must be non-negative");
  const Vertex src[] = {center};
  const auto dist = hop_distances(g, src, k);
  SubgraphScope s;
  s.hops = k;
  s.center = center;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const int dv = dist[static_cast<size_t>(v)];
    if (dv < 0) continue;
    s.vertices.push_back(v);
    if (dv <= std::max(k - 1, 0)) s.core_vertices.push_back(v);
  }
  s.edges = induced_edges(g, s.vertices);
  s.core_edges = induced_edges(g, s.core_vertices);
  return s;
}

SubgraphScope khop_core(const WeightedGraph& g, const SubgraphScope& h, int k) {
  std::vector<char> in(static_cast<size_t>(g.num_vertices()), 0);
  for (Vertex v : h.vertices) in[static_cast<size_t>(v)] = 1;
  std::vector<Vertex> complement;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!in[static_cast<size_t>(v)]) complement.push_back(v);
  }
  SubgraphScope out;
  out.vertices = h.vertices;
  out.edges = h.edges;
  out.hops = k;
  out.center = h.center;
  if (complement.empty()) {
    out.core_vertices = h.vertices;
  } else {
    const auto dist = hop_distances(g, complement);
    for (Vertex v : h.vertices) {
      const int dv = dist[static_cast<size_t>(v)];
      if (dv < 0 || dv >= k) out.core_vertices.push_back(v);
    }
  }
  out.core_edges = induced_edges(g, out.core_vertices);
  return out;
}

SubgraphScope dhop_expansion(const WeightedGraph& g, const SubgraphScope& core,
                             int d) {
  if (d < 0) throw InvalidParam("expansion depth must be non-negative");
  const auto dist = hop_distances(g, core.vertices, d);
  SubgraphScope out;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (dist[static_cast<size_t>(v)] >= 0) out.vertices.push_back(v);
  }
  out.edges = induced_edges(g, out.vertices);
  out.core_vertices = core.vertices;
  out.core_edges = core.edges;
  out.hops = d;
  out.center = core.center;
  return out;
}

Eigen::MatrixXd incidence(const WeightedGraph& g,
                          std::span<const Vertex> vertices,
                          std::span<const EdgeId> edges) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vertices.size()),
                                            static_cast<Eigen::Index>(edges.size()));
  for (size_t j = 0; j < edges.size(); ++j) {
    const auto& e = g.edge(edges[j]);
    bool touched = false;
    for (size_t i = 0; i < vertices.size(); ++i) {
      if (vertices[i] == e.u || vertices[i] == e.v) {
        b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
        touched = true;
      }
    }
    if (!touched) {
      throw InvalidParam("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") touches no listed vertex");
    }
  }
  return b;
}

std::vector<EdgeId> write_set(const WeightedGraph& g, const SubgraphScope& s,
                              WriteSet kind) {
  if (kind == WriteSet::kInducedEdges) return s.edges;
  std::vector<EdgeId> out;
  for (Vertex v : s.core_vertices) {
    for (const auto& inc : g.incident(v)) out.push_back(inc.edge);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool pairwise_edge_disjoint(const WeightedGraph& g,
                            std::span<const SubgraphScope> scopes,
                            WriteSet kind) {
  std::vector<char> owned(static_cast<size_t>(g.num_edges()), 0);
  for (const auto& s : scopes) {
    for (EdgeId e : write_set(g, s, kind)) {
      if (owned[static_cast<size_t>(e)]) return false;
      owned[static_cast<size_t>(e)] = 1;
    }
  }
  return true;
}

std::vector<SubgraphScope> sample_disjoint_neighborhoods(
    const WeightedGraph& g, std::vector<Vertex>& unvisited, int m, int k,
    Rng& rng, WriteSet kind, int max_resample) {
  if (unvisited.empty()) throw InvalidParam("no unvisited vertices to sample from");
  if (m < 1) throw InvalidParam("worker count must be at least 1");
  const size_t draw = std::min(static_cast<size_t>(m), unvisited.size());

  std::vector<SubgraphScope> best;
  std::vector<char> owned(static_cast<size_t>(g.num_edges()), 0);
  for (int attempt = 0; attempt < std::max(max_resample, 1); ++attempt) {
    // Partial Fisher-Yates over a copy keeps `unvisited` untouched until
    // the final choice is known.
    std::vector<Vertex> pool = unvisited;
    for (size_t i = 0; i < draw; ++i) {
      std::uniform_int_distribution<size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::fill(owned.begin(), owned.end(), 0);
    std::vector<SubgraphScope> accepted;
    bool collided = false;
    for (size_t i = 0; i < draw; ++i) {
      auto scope = khop_neighborhood(g, pool[i], k);
      const auto ws = write_set(g, scope, kind);
      const bool hit = std::any_of(ws.begin(), ws.end(), [&](EdgeId e) {
        return owned[static_cast<size_t>(e)] != 0;
      });
      if (hit) {
        collided = true;
        continue;
      }
      for (EdgeId e : ws) owned[static_cast<size_t>(e)] = 1;
      accepted.push_back(std::move(scope));
    }
    if (accepted.size() > best.size()) best = std::move(accepted);
    if (!collided) break;
  }

  if (!pairwise_edge_disjoint(g, best, kind)) {
    throw std::logic_error("sampled neighborhoods share an edge");
  }
  std::vector<Vertex> chosen;
  for (const auto& s : best) chosen.push_back(*s.center);
  chosen = sorted_unique(std::move(chosen));
  std::erase_if(unvisited, [&](Vertex v) {
    return std::binary_search(chosen.begin(), chosen.end(), v);
  });
  return best;
}

}  // namespace spectune
