#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nltrefftz/geometry.hpp"

namespace nltrefftz {

struct QuadratureRule {
  int dim = 1;
  std::vector<Point> nodes;
  std::vector<double> weights;
  /// Total polynomial degree integrated exactly.
  int order = 0;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with `n_points` nodes on [a, b].
QuadratureRule gauss_legendre(int n_points, double a, double b);

/// Tensor product of two 1D rules; x from `rx`, y from `ry`.
QuadratureRule tensor_rule(const QuadratureRule& rx, const QuadratureRule& ry);

/// Reference nodes/weights on [-1, 1], cached per size. Thread safe.
const QuadratureRule& reference_gauss_legendre(int n_points);

/// Default relative singular-value cutoff for constraint null spaces.
inline constexpr double kDefaultNullTol = 1e-9;

/// Orthonormal basis (as columns) of ker A. Singular values s <= rel_tol * s_max
/// count as zero; a zero matrix (or one without rows) yields the identity.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rel_tol = kDefaultNullTol);

/// Numerical rank under the same cutoff policy as null_space.
Eigen::Index numerical_rank(const Eigen::MatrixXd& a, double rel_tol = kDefaultNullTol);

struct LeastSquaresFit {
  Eigen::VectorXd coeffs;
  /// sqrt(sum_i w_i (B c - t)_i^2)
  double residual = 0.0;
};

/// Weighted least squares through a truncated SVD pseudo-inverse; returns the
/// minimal-norm minimizer. Rank deficiency is allowed.
LeastSquaresFit least_squares_fit(const Eigen::MatrixXd& basis_samples, const Eigen::VectorXd& target_samples,
                                  const Eigen::VectorXd& weights, double rel_tol = 1e-12);

}  // namespace nltrefftz
