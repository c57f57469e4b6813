#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spectune/graph.hpp"
#include "spectune/spectral_cost.hpp"

namespace spectune {

/// One row per core edge; row for edge (a, b) has entry p = p * Tr(S_ab^2 L^{p-1}).
struct ZMatrix {
  Eigen::MatrixXd rows;
  std::vector<EdgeId> edges;  // canonical core-edge order
};

struct AlignmentReport {
  int edge_count = 0;
  std::vector<double> sigma;  // descending
  double ratio = 0.0;         // sigma_1 / sigma_2, +inf when sigma_2 == 0
  int axis = 0;
  double overlap = 0.0;
  std::vector<double> direction;  // dominant right singular vector
  bool pass = false;
};

/// Tr(M S_ab^2) = M_aa + M_bb - 2 M_ab, without forming S_ab^2.
double edge_perturbation_trace(const Eigen::MatrixXd& m, Eigen::Index a, Eigen::Index b);

/// z row for a single edge from a dense Laplacian (powers computed here).
Eigen::VectorXd z_vector(const Eigen::MatrixXd& l, Eigen::Index a, Eigen::Index b, int d);

/// Snapshot of a subgraph H: its local Laplacian with the core-edge weights
/// as the free variables and every other weight frozen at construction.
class SubgraphModel {
 public:
  SubgraphModel(const WeightedGraph& g, const SubgraphScope& h);

  const SubgraphScope& scope() const { return scope_; }
  int num_vertices() const { return static_cast<int>(scope_.vertices.size()); }
  int num_core_edges() const { return static_cast<int>(core_slot_.size()); }

  std::vector<double> core_weights() const;
  void set_core_weights(std::span<const double> w);

  Eigen::SparseMatrix<double> laplacian() const;
  LaplacianPowers powers(int d) const { return LaplacianPowers(laplacian(), d); }

  /// Rows in core-edge order; EmptyCore when the core has no edges.
  ZMatrix z_matrix(const LaplacianPowers& powers) const;

 private:
  SubgraphScope scope_;
  std::vector<int> local_u_, local_v_;  // per H edge, local endpoint indices
  std::vector<double> weights_;         // per H edge
  std::vector<int> core_slot_;          // core edge -> index into H edges
};

/// Z for the core of H using L_H of the whole scope and g's current weights.
ZMatrix z_matrix(const WeightedGraph& g, const SubgraphScope& h, int d);

/// Z * (C + C^T) * v.
Eigen::VectorXd gradient(const ZMatrix& z, const CoefficientMatrix& c,
                         const TracePowerVector& v);

/// SVD of Z (C + C^T). Passes iff sigma_1 / sigma_2 >= tau_dom and the
/// dominant right singular vector has an entry of magnitude >= tau_axis.
AlignmentReport alignment_test(const ZMatrix& z, const CoefficientMatrix& c,
                               double tau_dom = 10.0, double tau_axis = 0.95);
AlignmentReport alignment_test(const Eigen::MatrixXd& zc, double tau_dom,
                               double tau_axis);

}  // namespace spectune
