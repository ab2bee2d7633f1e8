#include "nltrefftz/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace nltrefftz {

namespace {

QuadratureRule compute_reference_rule(int n) {
  QuadratureRule rule;
  rule.dim = 1;
  rule.order = 2 * n - 1;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess; symmetric fill.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = z;
        p0 = 1.0;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = {-z, 0.0};
    rule.nodes[n - 1 - i] = {z, 0.0};
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = {0.0, 0.0};
  return rule;
}

}  // namespace

const QuadratureRule& reference_gauss_legendre(int n_points) {
  if (n_points < 1) throw std::invalid_argument("gauss_legendre needs at least one point");
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n_points);
  if (it == cache.end()) it = cache.emplace(n_points, compute_reference_rule(n_points)).first;
  return it->second;
}

QuadratureRule gauss_legendre(int n_points, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("gauss_legendre interval must satisfy a < b");
  QuadratureRule rule = reference_gauss_legendre(n_points);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i].x = mid + half * rule.nodes[i].x;
    rule.weights[i] *= half;
  }
  return rule;
}

QuadratureRule tensor_rule(const QuadratureRule& rx, const QuadratureRule& ry) {
  if (rx.dim != 1 || ry.dim != 1) throw std::invalid_argument("tensor_rule takes two 1D rules");
  QuadratureRule rule;
  rule.dim = 2;
  rule.order = std::min(rx.order, ry.order);
  for (std::size_t i = 0; i < rx.size(); ++i)
    for (std::size_t j = 0; j < ry.size(); ++j) {
      rule.nodes.push_back({rx.nodes[i].x, ry.nodes[j].x});
      rule.weights.push_back(rx.weights[i] * ry.weights[j]);
    }
  return rule;
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  if (smax == 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * smax) ++rank;
  return rank;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rel_tol) {
  if (!a.allFinite()) throw std::invalid_argument("null_space: matrix has non-finite entries");
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  if (smax == 0.0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * smax) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

LeastSquaresFit least_squares_fit(const Eigen::MatrixXd& basis_samples, const Eigen::VectorXd& target_samples,
                                  const Eigen::VectorXd& weights, double rel_tol) {
  const Eigen::Index nq = target_samples.size();
  if (basis_samples.rows() != nq || weights.size() != nq)
    throw std::invalid_argument("least_squares_fit: sample/weight size mismatch");
  if ((weights.array() <= 0.0).any()) throw std::invalid_argument("least_squares_fit: weights must be positive");
  const Eigen::VectorXd sw = weights.array().sqrt();
  const Eigen::VectorXd t = sw.cwiseProduct(target_samples);
  LeastSquaresFit fit;
  fit.coeffs = Eigen::VectorXd::Zero(basis_samples.cols());
  if (basis_samples.cols() == 0 || nq == 0) {
    fit.residual = t.norm();
    return fit;
  }
  const Eigen::MatrixXd b = sw.asDiagonal() * basis_samples;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  if (smax > 0.0) {
    const Eigen::VectorXd ut = svd.matrixU().transpose() * t;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel_tol * smax) y(i) = ut(i) / s(i);
    fit.coeffs = svd.matrixV() * y;
  }
  fit.residual = (b * fit.coeffs - t).norm();
  return fit;
}

}  // namespace nltrefftz
