#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace spectune {

using Vertex = int;
using EdgeId = int;
using Rng = std::mt19937_64;

/// Unordered vertex pair stored canonically with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Simple, undirected, connected graph with positive edge weights.
///
/// Edges are kept in canonical (u, v) lexicographic order and edge ids index
/// into that order; the weight array shares the same indexing. Construction
/// canonicalizes the input and rejects self-loops, duplicates, non-positive
/// weights and disconnected topologies.
class WeightedGraph {
 public:
  struct Incident {
    Vertex neighbor;
    EdgeId edge;
  };

  WeightedGraph(int n, std::vector<Edge> edges, std::vector<double> weights,
                std::optional<std::vector<Point2>> coords = std::nullopt);

  /// Same topology, every weight 1.
  static WeightedGraph with_unit_weights(int n, std::vector<Edge> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<size_t>(e)]; }
  std::span<const double> weights() const { return weights_; }
  double weight(EdgeId e) const { return weights_[static_cast<size_t>(e)]; }
  double total_weight() const;
  const std::optional<std::vector<Point2>>& coords() const { return coords_; }

  /// Neighbors of v sorted by neighbor id.
  std::span<const Incident> incident(Vertex v) const {
    return adjacency_[static_cast<size_t>(v)];
  }
  std::optional<EdgeId> find_edge(Vertex a, Vertex b) const;

  /// Weighted degree vector A(w)·1.
  Eigen::VectorXd weighted_degrees() const;

  /// Replaces every weight. Weights must be finite and positive.
  void set_weights(std::vector<double> weights);
  void set_weight(EdgeId e, double w);

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ && a.weights_ == b.weights_ &&
           a.coords_ == b.coords_;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  std::optional<std::vector<Point2>> coords_;
  std::vector<std::vector<Incident>> adjacency_;
};

/// Induced subgraph H together with a distinguished core H'.
///
/// All ids are global (vertex ids and edge ids of the parent graph), sorted
/// ascending.
struct SubgraphScope {
  std::vector<Vertex> vertices;
  std::vector<EdgeId> edges;
  std::vector<Vertex> core_vertices;
  std::vector<EdgeId> core_edges;
  int hops = 0;
  std::optional<Vertex> center;
};

/// The whole graph as a scope whose core is also the whole graph.
SubgraphScope whole_graph_scope(const WeightedGraph& g);

/// Points i.i.d. uniform in the unit square, edge iff distance < radius,
/// unit weights. Disconnected draws are discarded and redrawn from the same
/// stream; ConnectivityFailure after `max_retries` draws.
WeightedGraph generate_geometric(int n, double radius, std::uint64_t seed,
                                 int max_retries = 100);

bool is_connected(int n, const std::vector<Edge>& edges);

Eigen::MatrixXd laplacian(const WeightedGraph& g);
Eigen::MatrixXd adjacency_matrix(const WeightedGraph& g);

/// Laplacian of the subgraph on `vertices` (sorted) using only `edges`.
/// Row/column i corresponds to vertices[i].
Eigen::SparseMatrix<double> local_laplacian(const WeightedGraph& g,
                                            std::span<const Vertex> vertices,
                                            std::span<const EdgeId> edges);

/// Unweighted multi-source hop distances; -1 for vertices further than
/// `max_hops` (or unreachable). A negative `max_hops` means unbounded.
std::vector<int> hop_distances(const WeightedGraph& g,
                               std::span<const Vertex> sources,
                               int max_hops = -1);

/// Edge ids with both endpoints in `vertices` (sorted).
std::vector<EdgeId> induced_edges(const WeightedGraph& g,
                                  std::span<const Vertex> vertices);

/// Induced subgraph on every vertex within k hops of `center`. Its core is
/// the closed (k-1)-hop ball, i.e. the vertices whose whole neighborhood
/// lies inside the subgraph ({center} for k = 1).
SubgraphScope khop_neighborhood(const WeightedGraph& g, Vertex center, int k);

/// k-hop core of H: vertices of H at hop distance >= k from V \ V_H, with
/// induced edges. An empty complement counts as infinitely far away, so the
/// core of the whole graph is the whole graph.
SubgraphScope khop_core(const WeightedGraph& g, const SubgraphScope& h, int k);

/// Everything within d hops of the core's vertices; `core` is recorded as
/// the result's core.
SubgraphScope dhop_expansion(const WeightedGraph& g, const SubgraphScope& core,
                             int d);

/// |vertices| x |edges| 0/1 matrix, B(i, j) = 1 iff vertices[i] is an
/// endpoint of edges[j].
Eigen::MatrixXd incidence(const WeightedGraph& g,
                          std::span<const Vertex> vertices,
                          std::span<const EdgeId> edges);

/// Which edges a worker on a neighborhood may write, used for collisions.
enum class WriteSet {
  kInducedEdges,       ///< every edge of the neighborhood (descent cores)
  kIncidentToCore,     ///< every edge touching a core vertex (degree matching)
};

std::vector<EdgeId> write_set(const WeightedGraph& g, const SubgraphScope& s,
                              WriteSet kind);

/// Draws up to m centers from `unvisited` without replacement and builds
/// their k-hop neighborhoods, redrawing until the write sets are pairwise
/// edge-disjoint. After `max_resample` failed draws the largest greedy
/// edge-disjoint subcollection seen is returned. Returned centers are
/// removed from `unvisited`.
std::vector<SubgraphScope> sample_disjoint_neighborhoods(
    const WeightedGraph& g, std::vector<Vertex>& unvisited, int m, int k,
    Rng& rng, WriteSet kind = WriteSet::kInducedEdges, int max_resample = 50);

/// True iff the write sets of all scopes are pairwise disjoint.
bool pairwise_edge_disjoint(const WeightedGraph& g,
                            std::span<const SubgraphScope> scopes,
                            WriteSet kind);

}  // namespace spectune
