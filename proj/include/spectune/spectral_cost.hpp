#pragma once

#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "spectune/graph.hpp"

namespace spectune {

/// Monomial coefficients c_pq of a pairwise polynomial
/// g(x, y) = sum_{p,q} c_pq x^p y^q, indexed 0-based by power.
class CoefficientMatrix {
 public:
  explicit CoefficientMatrix(Eigen::MatrixXd raw);

  static CoefficientMatrix zero(int degree);

  const Eigen::MatrixXd& raw() const { return raw_; }
  /// raw + raw^T.
  const Eigen::MatrixXd& symmetrized() const { return sym_; }
  int degree() const { return static_cast<int>(raw_.rows()) - 1; }

  /// g(x, y).
  double evaluate(double x, double y) const;

 private:
  Eigen::MatrixXd raw_;
  Eigen::MatrixXd sym_;
};

/// Expands g(x, y) = h(x - y), h(t) = sum_k a_k t^k, into monomial form.
CoefficientMatrix expand_eigendifference(const std::map<int, double>& coeffs);

/// g(x, y) = (x - y)^4 - (x - y)^2, the benchmark objective.
CoefficientMatrix quartic_spread_cost();

/// Entry p holds Tr(L^p) for p = 0..d.
struct TracePowerVector {
  Eigen::VectorXd values;

  int degree() const { return static_cast<int>(values.size()) - 1; }
  double operator[](int p) const { return values[p]; }
};

/// Dense repeated multiplication; L must be symmetric.
TracePowerVector trace_powers(const Eigen::MatrixXd& l, int d);

/// Cached dense powers of a (sparse) Laplacian, enough to read any entry of
/// L^k for k <= d and every trace Tr(L^p), p <= d.
///
/// Only powers up to ceil(d/2) are stored; higher entries are inner products
/// of a stored row and a stored column.
class LaplacianPowers {
 public:
  LaplacianPowers(const Eigen::SparseMatrix<double>& l, int d);

  int degree() const { return degree_; }
  Eigen::Index size() const { return n_; }
  /// (L^k)_{ab}, 0 <= k <= d.
  double entry(int k, Eigen::Index a, Eigen::Index b) const;
  TracePowerVector traces() const;

 private:
  int degree_;
  Eigen::Index n_;
  std::vector<Eigen::MatrixXd> powers_;  // powers_[i] = L^{i+1}
};

/// v^T c v for the raw coefficient matrix.
double bilinear_cost(const TracePowerVector& v, const CoefficientMatrix& c);

/// J(w) = sum_{p,q} c_pq Tr(L^p) Tr(L^q), diagonal pairs included.
double cost_trace_form(const WeightedGraph& g, const CoefficientMatrix& c);

/// Ascending Laplacian eigenvalues.
Eigen::VectorXd laplacian_spectrum(const WeightedGraph& g);

using PairwiseFunction = std::function<double(double, double)>;

/// sum over ordered pairs i != j of g(lambda_i, lambda_j), by full
/// eigendecomposition. Test-scale only.
double cost_eigen_oracle(const WeightedGraph& g, const PairwiseFunction& gfun);

}  // namespace spectune
