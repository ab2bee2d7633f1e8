#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nltrefftz/geometry.hpp"
#include "nltrefftz/nlconv.hpp"
#include "nltrefftz/numerics.hpp"
#include "nltrefftz/trefftz.hpp"

namespace nltrefftz {

/// Divergence-free test field (dv/dy, -dv/dx) with v = sin x e^y + e^-x cos y.
Vector2 d_test(Point p);

using FieldSampler = std::function<Vector2(Point)>;

/// min over span(space) of sqrt(area^-1 * integral over omega_t of |D - target|^2),
/// with both components stacked into one weighted least-squares problem.
double approx_error(const std::vector<FieldSampler>& space, const FieldSampler& target, const Box& omega_t,
                    const QuadratureRule& quad);

/// Same metric from presampled fields. Columns of `space_samples` hold the
/// stacked (x-components, then y-components) samples at the quadrature nodes.
double approx_error_sampled(const Eigen::MatrixXd& space_samples, const Eigen::VectorXd& target_samples,
                            const Box& omega_t, const QuadratureRule& quad);

/// Constraint order used for a given n_max: min(m_max, n_max - 2) when capped
/// (so the divergence rows of degree-n_max potentials are never void), m_max otherwise.
struct MRule {
  int m_max = 2;
  bool capped = true;

  int operator()(int n_max) const { return capped ? std::min(m_max, n_max - 2) : m_max; }
};

struct ConvergenceRow {
  int n_max = 0;
  int m = 0;
  Eigen::Index n_funcs_trefftz = 0;
  double error_trefftz = 0.0;
  Eigen::Index n_funcs_taylor = 0;
  double error_taylor = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::string target = "D_test = (dv/dy, -dv/dx), v = sin(x) exp(y) + exp(-x) cos(y)";
  Box omega_a{};
  Box omega_t{};
  Point x0{};
  bool include_local_term = false;
  std::string norm = "sqrt(area(omega_t)^-1 * integral_omega_t |D|^2)";
};

struct ConvergenceOptions {
  bool include_local_term = false;
  int quad_points = 24;
  ConstraintIndexing indexing = ConstraintIndexing::UpToM;
};

/// Trefftz-vs-Taylor approximation errors of d_test on omega_t for each n_max.
/// Trefftz D-fields are -(kernel *_omega_a grad u), or the full constitutive law
/// of `cfg` when include_local_term is set; Taylor fits each component separately.
ConvergenceReport convergence_study(const ConvConfig& cfg, const std::vector<int>& n_max_list, MRule m_rule,
                                    const Box& omega_a, const Box& omega_t, Point x0,
                                    const ConvergenceOptions& options = {});

/// Taylor error interpolated log-linearly in function count at `count`;
/// NaN when `count` is outside the Taylor counts of the report.
double taylor_error_at_count(const ConvergenceReport& report, double count);

/// Least-squares slope of log(error) against function count over the given rows.
double log_error_slope(const std::vector<std::pair<double, double>>& count_error);

}  // namespace nltrefftz
