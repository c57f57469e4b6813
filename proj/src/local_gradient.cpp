#include "spectune/local_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectune/errors.hpp"

namespace spectune {

double edge_perturbation_trace(const Eigen::MatrixXd& m, Eigen::Index a, Eigen::Index b) {
  if (a == b) throw InvalidParam("edge perturbation needs two distinct vertices");
  return m(a, a) + m(b, b) - 2.0 * m(a, b);
}

Eigen::VectorXd z_vector(const Eigen::MatrixXd& l, Eigen::Index a, Eigen::Index b, int d) {
  if (a == b) throw InvalidParam("edge perturbation needs two distinct vertices");
  if (d < 1) throw InvalidParam("degree must be >= 1");
  Eigen::VectorXd z = Eigen::VectorXd::Zero(d + 1);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(l.rows(), l.cols());
  for (int p = 1; p <= d; ++p) {
    z[p] = p * edge_perturbation_trace(power, a, b);
    if (p < d) power = power * l;
  }
  return z;
}

SubgraphModel::SubgraphModel(const WeightedGraph& g, const SubgraphScope& h) : scope_(h) {
  const auto local = [&](Vertex v) {
    auto it = std::lower_bound(scope_.vertices.begin(), scope_.vertices.end(), v);
    if (it == scope_.vertices.end() || *it != v) {
      throw InvalidParam("edge endpoint outside subgraph");
    }
    return static_cast<int>(it - scope_.vertices.begin());
  };
  local_u_.reserve(h.edges.size());
  local_v_.reserve(h.edges.size());
  weights_.reserve(h.edges.size());
  for (EdgeId e : h.edges) {
    local_u_.push_back(local(g.edge(e).u));
    local_v_.push_back(local(g.edge(e).v));
    weights_.push_back(g.weight(e));
  }
  for (EdgeId e : h.core_edges) {
    auto it = std::lower_bound(scope_.edges.begin(), scope_.edges.end(), e);
    if (it == scope_.edges.end() || *it != e) {
      throw InvalidParam("core edge outside subgraph");
    }
    core_slot_.push_back(static_cast<int>(it - scope_.edges.begin()));
  }
}

std::vector<double> SubgraphModel::core_weights() const {
  std::vector<double> w;
  w.reserve(core_slot_.size());
  for (int s : core_slot_) w.push_back(weights_[static_cast<size_t>(s)]);
  return w;
}

void SubgraphModel::set_core_weights(std::span<const double> w) {
  if (w.size() != core_slot_.size()) throw DimensionMismatch("core weight count");
  for (size_t i = 0; i < w.size(); ++i) weights_[static_cast<size_t>(core_slot_[i])] = w[i];
}

Eigen::SparseMatrix<double> SubgraphModel::laplacian() const {
  const auto n = static_cast<Eigen::Index>(scope_.vertices.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(weights_.size() * 4);
  for (size_t i = 0; i < weights_.size(); ++i) {
    const int a = local_u_[i], b = local_v_[i];
    const double w = weights_[i];
    trip.emplace_back(a, a, w);
    trip.emplace_back(b, b, w);
    trip.emplace_back(a, b, -w);
    trip.emplace_back(b, a, -w);
  }
  Eigen::SparseMatrix<double> l(n, n);
  l.setFromTriplets(trip.begin(), trip.end());
  return l;
}

ZMatrix SubgraphModel::z_matrix(const LaplacianPowers& powers) const {
  if (core_slot_.empty()) throw EmptyCore("subgraph core has no edges");
  const int d = powers.degree();
  ZMatrix z;
  z.edges = scope_.core_edges;
  z.rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(core_slot_.size()), d + 1);
  for (size_t r = 0; r < core_slot_.size(); ++r) {
    const auto slot = static_cast<size_t>(core_slot_[r]);
    const int a = local_u_[slot], b = local_v_[slot];
    const auto row = static_cast<Eigen::Index>(r);
    z.rows(row, 1) = 2.0;
    for (int p = 2; p <= d; ++p) {
      const double t = powers.entry(p - 1, a, a) + powers.entry(p - 1, b, b) -
                       2.0 * powers.entry(p - 1, a, b);
      z.rows(row, p) = p * t;
    }
  }
  return z;
}

ZMatrix z_matrix(const WeightedGraph& g, const SubgraphScope& h, int d) {
  const SubgraphModel model(g, h);
  if (model.num_core_edges() == 0) throw EmptyCore("subgraph core has no edges");
  return model.z_matrix(model.powers(d));
}

Eigen::VectorXd gradient(const ZMatrix& z, const CoefficientMatrix& c,
                         const TracePowerVector& v) {
  const auto k = c.raw().rows();
  if (z.rows.cols() != k || v.values.size() != k) {
    throw DimensionMismatch("Z has " + std::to_string(z.rows.cols()) + " columns, C is " +
                            std::to_string(k) + "x" + std::to_string(k) + ", v has " +
                            std::to_string(v.values.size()) + " entries");
  }
  return z.rows * (c.symmetrized() * v.values);
}

AlignmentReport alignment_test(const ZMatrix& z, const CoefficientMatrix& c,
                               double tau_dom, double tau_axis) {
  if (z.rows.cols() != c.raw().rows()) {
    throw DimensionMismatch("Z columns do not match coefficient matrix");
  }
  return alignment_test(z.rows * c.symmetrized(), tau_dom, tau_axis);
}

AlignmentReport alignment_test(const Eigen::MatrixXd& zc, double tau_dom,
                               double tau_axis) {
  if (zc.rows() == 0) throw EmptyCore("alignment test on an empty Z");
  AlignmentReport rep;
  rep.edge_count = static_cast<int>(zc.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(zc, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  rep.sigma.assign(s.data(), s.data() + s.size());
  const double s1 = s.size() > 0 ? s[0] : 0.0;
  const double s2 = s.size() > 1 ? s[1] : 0.0;
  if (s1 == 0.0) {
    // No gradient signal at all.
    rep.ratio = 0.0;
    rep.pass = false;
    rep.direction.assign(static_cast<size_t>(zc.cols()), 0.0);
    return rep;
  }
  rep.ratio = s2 == 0.0 ? std::numeric_limits<double>::infinity() : s1 / s2;

  Eigen::VectorXd v1 = svd.matrixV().col(0);
  Eigen::Index j = 0;
  v1.cwiseAbs().maxCoeff(&j);
  if (v1[j] < 0.0) v1 = -v1;
  rep.axis = static_cast<int>(j);
  rep.overlap = std::min(1.0, std::abs(v1[j]));
  rep.direction.assign(v1.data(), v1.data() + v1.size());
  rep.pass = rep.ratio >= tau_dom && rep.overlap >= tau_axis;
  return rep;
}

}  // namespace spectune
