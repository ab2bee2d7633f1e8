#include "nltrefftz/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nltrefftz {

namespace {

Eigen::VectorXd stacked_weights(const QuadratureRule& quad, double area) {
  const auto nq = static_cast<Eigen::Index>(quad.size());
  Eigen::VectorXd w(2 * nq);
  for (Eigen::Index i = 0; i < nq; ++i) w(i) = w(nq + i) = quad.weights[i] / area;
  return w;
}

Eigen::VectorXd stacked_samples(const FieldSampler& f, const QuadratureRule& quad) {
  const auto nq = static_cast<Eigen::Index>(quad.size());
  Eigen::VectorXd s(2 * nq);
  for (Eigen::Index i = 0; i < nq; ++i) {
    const Vector2 v = f(quad.nodes[i]);
    s(i) = v[0];
    s(nq + i) = v[1];
  }
  return s;
}

}  // namespace

Vector2 d_test(Point p) {
  // v = sin x e^y + e^-x cos y
  const double dv_dx = std::cos(p.x) * std::exp(p.y) - std::exp(-p.x) * std::cos(p.y);
  const double dv_dy = std::sin(p.x) * std::exp(p.y) - std::exp(-p.x) * std::sin(p.y);
  return {dv_dy, -dv_dx};
}

double approx_error_sampled(const Eigen::MatrixXd& space_samples, const Eigen::VectorXd& target_samples,
                            const Box& omega_t, const QuadratureRule& quad) {
  const double area = omega_t.measure(2);
  if (!(area > 0.0)) throw std::invalid_argument("approx_error: target box has zero area");
  return least_squares_fit(space_samples, target_samples, stacked_weights(quad, area)).residual;
}

double approx_error(const std::vector<FieldSampler>& space, const FieldSampler& target, const Box& omega_t,
                    const QuadratureRule& quad) {
  const auto nq = static_cast<Eigen::Index>(quad.size());
  Eigen::MatrixXd b(2 * nq, static_cast<Eigen::Index>(space.size()));
  for (std::size_t k = 0; k < space.size(); ++k) b.col(static_cast<Eigen::Index>(k)) = stacked_samples(space[k], quad);
  return approx_error_sampled(b, stacked_samples(target, quad), omega_t, quad);
}

ConvergenceReport convergence_study(const ConvConfig& cfg, const std::vector<int>& n_max_list, MRule m_rule,
                                    const Box& omega_a, const Box& omega_t, Point x0,
                                    const ConvergenceOptions& options) {
  if (cfg.kernel.dim != 2) throw std::invalid_argument("convergence_study is 2D");
  const bool inside = omega_a.contains(omega_t.lo, 2) && omega_a.contains(omega_t.hi, 2);
  if (!inside) throw std::invalid_argument("convergence_study: omega_t must lie inside omega_a");

  ConvergenceReport report;
  report.omega_a = omega_a;
  report.omega_t = omega_t;
  report.x0 = x0;
  report.include_local_term = options.include_local_term;

  ConvConfig build_cfg = cfg;
  build_cfg.conv_domain = box_domain(omega_a);
  // D_a(u) = -(kernel *_omega_a grad u) unless the full law is requested.
  ConvConfig field_cfg = build_cfg;
  if (!options.include_local_term) {
    field_cfg.eps_loc = 0.0;
    field_cfg.eps_nl = 1.0;
  }

  const QuadratureRule quad = tensor_rule(gauss_legendre(options.quad_points, omega_t.lo.x, omega_t.hi.x),
                                          gauss_legendre(options.quad_points, omega_t.lo.y, omega_t.hi.y));
  const auto nq = static_cast<Eigen::Index>(quad.size());
  const Eigen::VectorXd target = stacked_samples(d_test, quad);

  for (const int n_max : n_max_list) {
    ConvergenceRow row;
    row.n_max = n_max;
    row.m = m_rule(n_max);

    // Trefftz space: D-fields of every pseudoharmonic function.
    const TrefftzSet ts = build_trefftz_bulk(build_cfg, n_max, x0, row.m, omega_t, {options.indexing});
    const auto basis = basis_functions(ts);
    Eigen::MatrixXd basis_samples(2 * nq, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (Eigen::Index i = 0; i < nq; ++i) {
        const Vector2 d = d_field(field_cfg, basis[a], quad.nodes[i]);
        basis_samples(i, static_cast<Eigen::Index>(a)) = d[0];
        basis_samples(nq + i, static_cast<Eigen::Index>(a)) = d[1];
      }
    const Eigen::MatrixXd trefftz_samples = basis_samples * ts.coeffs.transpose();
    row.n_funcs_trefftz = ts.size();
    row.error_trefftz = approx_error_sampled(trefftz_samples, target, omega_t, quad);

    // Taylor space: each component fitted by all monomials of degree <= n_max.
    const auto monomials = monomial_basis(2, n_max, x0);
    const auto nm = static_cast<Eigen::Index>(monomials.size());
    Eigen::MatrixXd taylor = Eigen::MatrixXd::Zero(2 * nq, 2 * nm);
    for (Eigen::Index k = 0; k < nm; ++k)
      for (Eigen::Index i = 0; i < nq; ++i) {
        const double v = monomials[k](quad.nodes[i]);
        taylor(i, k) = v;
        taylor(nq + i, nm + k) = v;
      }
    row.n_funcs_taylor = 2 * nm;
    row.error_taylor = approx_error_sampled(taylor, target, omega_t, quad);
    report.rows.push_back(row);
  }
  return report;
}

double taylor_error_at_count(const ConvergenceReport& report, double count) {
  const auto& rows = report.rows;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double c0 = static_cast<double>(rows[i].n_funcs_taylor);
    const double c1 = static_cast<double>(rows[i + 1].n_funcs_taylor);
    if (count >= c0 && count <= c1) {
      const double t = (count - c0) / (c1 - c0);
      return std::exp((1.0 - t) * std::log(rows[i].error_taylor) + t * std::log(rows[i + 1].error_taylor));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double log_error_slope(const std::vector<std::pair<double, double>>& count_error) {
  const auto n = static_cast<double>(count_error.size());
  if (count_error.size() < 2) throw std::invalid_argument("log_error_slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [c, e] : count_error) {
    const double y = std::log(e);
    sx += c;
    sy += y;
    sxx += c * c;
    sxy += c * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace nltrefftz
