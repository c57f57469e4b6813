#include "spectune/spectral_cost.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectune/errors.hpp"

namespace spectune {

CoefficientMatrix::CoefficientMatrix(Eigen::MatrixXd raw) : raw_(std::move(raw)) {
  if (raw_.rows() != raw_.cols()) {
    throw DimensionMismatch("coefficient matrix must be square");
  }
  if (raw_.rows() < 2) {
    throw InvalidParam("coefficient matrix must have degree >= 1");
  }
  if (!raw_.allFinite()) throw InvalidParam("coefficient matrix has non-finite entries");
  sym_ = raw_ + raw_.transpose();
}

CoefficientMatrix CoefficientMatrix::zero(int degree) {
  if (degree < 1) throw InvalidParam("degree must be >= 1");
  return CoefficientMatrix(Eigen::MatrixXd::Zero(degree + 1, degree + 1));
}

double CoefficientMatrix::evaluate(double x, double y) const {
  const int d = degree();
  Eigen::VectorXd px(d + 1), py(d + 1);
  px[0] = py[0] = 1.0;
  for (int p = 1; p <= d; ++p) {
    px[p] = px[p - 1] * x;
    py[p] = py[p - 1] * y;
  }
  return px.dot(raw_ * py);
}

CoefficientMatrix expand_eigendifference(const std::map<int, double>& coeffs) {
  int d = 1;
  for (const auto& [k, a] : coeffs) {
    if (k < 0) throw InvalidParam("negative power " + std::to_string(k));
    if (!std::isfinite(a)) throw InvalidParam("non-finite coefficient");
    d = std::max(d, k);
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d + 1, d + 1);
  for (const auto& [k, a] : coeffs) {
    // (x - y)^k = sum_m binom(k, m) x^m (-y)^{k-m}
    double binom = 1.0;
    for (int m = 0; m <= k; ++m) {
      const double sign = ((k - m) % 2 == 0) ? 1.0 : -1.0;
      c(m, k - m) += a * binom * sign;
      binom = binom * (k - m) / (m + 1);
    }
  }
  return CoefficientMatrix(std::move(c));
}

CoefficientMatrix quartic_spread_cost() {
  return expand_eigendifference({{4, 1.0}, {2, -1.0}});
}

TracePowerVector trace_powers(const Eigen::MatrixXd& l, int d) {
  if (d < 1) throw InvalidParam("trace power degree must be >= 1");
  if (l.rows() != l.cols()) throw DimensionMismatch("Laplacian must be square");
  TracePowerVector v;
  v.values.resize(d + 1);
  v.values[0] = static_cast<double>(l.rows());
  Eigen::MatrixXd power = l;
  v.values[1] = power.trace();
  for (int p = 2; p <= d; ++p) {
    power = power * l;
    v.values[p] = power.trace();
  }
  return v;
}

LaplacianPowers::LaplacianPowers(const Eigen::SparseMatrix<double>& l, int d)
    : degree_(d), n_(l.rows()) {
  if (d < 1) throw InvalidParam("power degree must be >= 1");
  const int half = (d + 1) / 2;
  powers_.reserve(static_cast<size_t>(half));
  powers_.emplace_back(Eigen::MatrixXd(l));
  for (int i = 1; i < half; ++i) {
    powers_.emplace_back(l * powers_.back());
  }
}

double LaplacianPowers::entry(int k, Eigen::Index a, Eigen::Index b) const {
  if (k < 0 || k > degree_) throw InvalidParam("power out of cached range");
  if (k == 0) return a == b ? 1.0 : 0.0;
  const int half = static_cast<int>(powers_.size());
  const int i = std::min(k, half);
  const int j = k - i;
  const auto& left = powers_[static_cast<size_t>(i - 1)];
  if (j == 0) return left(a, b);
  const auto& right = powers_[static_cast<size_t>(j - 1)];
  return left.row(a).dot(right.col(b));
}

TracePowerVector LaplacianPowers::traces() const {
  TracePowerVector v;
  v.values.resize(degree_ + 1);
  v.values[0] = static_cast<double>(n_);
  const int half = static_cast<int>(powers_.size());
  for (int p = 1; p <= degree_; ++p) {
    const int i = std::min(p, half);
    const int j = p - i;
    const auto& left = powers_[static_cast<size_t>(i - 1)];
    if (j == 0) {
      v.values[p] = left.trace();
    } else {
      // Tr(L^i L^j) with both factors symmetric.
      v.values[p] = left.cwiseProduct(powers_[static_cast<size_t>(j - 1)]).sum();
    }
  }
  return v;
}

double bilinear_cost(const TracePowerVector& v, const CoefficientMatrix& c) {
  if (v.values.size() != c.raw().rows()) {
    throw DimensionMismatch("trace vector length " + std::to_string(v.values.size()) +
                            " vs coefficient size " + std::to_string(c.raw().rows()));
  }
  return v.values.dot(c.raw() * v.values);
}

double cost_trace_form(const WeightedGraph& g, const CoefficientMatrix& c) {
  std::vector<Vertex> all(static_cast<size_t>(g.num_vertices()));
  for (Vertex v = 0; v < g.num_vertices(); ++v) all[static_cast<size_t>(v)] = v;
  std::vector<EdgeId> edges(static_cast<size_t>(g.num_edges()));
  for (EdgeId e = 0; e < g.num_edges(); ++e) edges[static_cast<size_t>(e)] = e;
  const LaplacianPowers powers(local_laplacian(g, all, edges), c.degree());
  return bilinear_cost(powers.traces(), c);
}

Eigen::VectorXd laplacian_spectrum(const WeightedGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian(g), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double cost_eigen_oracle(const WeightedGraph& g, const PairwiseFunction& gfun) {
  const Eigen::VectorXd lambda = laplacian_spectrum(g);
  double total = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
      if (i != j) total += gfun(lambda[i], lambda[j]);
    }
  }
  return total;
}

}  // namespace spectune
