#include "nltrefftz/bvp1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "nltrefftz/errors.hpp"
#include "nltrefftz/nlconv.hpp"

namespace nltrefftz {

namespace {

double sigma_of(const Kernel& k) {
  const auto* g = std::get_if<GaussianKernel>(&k.shape);
  if (g == nullptr || k.dim != 1) throw UnsupportedOperation("the 1D boundary-value solver needs a 1D gaussian kernel");
  return g->sigma;
}

void check(const BvpConfig& cfg) {
  if (!(cfg.a < cfg.c && cfg.c < cfg.d && cfg.d < cfg.b))
    throw std::invalid_argument("bvp1d: need a < c < d < b");
  if (cfg.n_cells < 16) throw std::invalid_argument("bvp1d: n_cells must be >= 16");
  if (!(cfg.eps_loc > 0.0) || !(cfg.eps_nl >= 0.0)) throw std::invalid_argument("bvp1d: invalid permittivities");
  if (!std::isfinite(cfg.u_a) || !std::isfinite(cfg.u_b)) throw std::invalid_argument("bvp1d: non-finite boundary values");
  sigma_of(cfg.kernel);
}

bool in_nonlocal(double x, const BvpSolution& sol) { return x < sol.c_snapped || x > sol.d_snapped; }

bool cell_in_domain(const BvpConfig& cfg, const BvpSolution& sol, std::size_t j) {
  return cfg.variant == ConvVariant::WholeDomain || in_nonlocal(sol.midpoints[j], sol);
}

bool conv_applies(const BvpConfig& cfg, const BvpSolution& sol, double x) {
  return cfg.apply_conv_in == ApplyConvIn::Everywhere || in_nonlocal(x, sol);
}

}  // namespace

std::string to_string(ConvVariant v) { return v == ConvVariant::WholeDomain ? "whole-domain" : "nonlocal-only"; }

std::string to_string(ApplyConvIn v) { return v == ApplyConvIn::Everywhere ? "everywhere" : "nonlocal-region"; }

ConvVariant conv_variant_from_string(const std::string& s) {
  if (s == "whole-domain") return ConvVariant::WholeDomain;
  if (s == "nonlocal-only") return ConvVariant::NonlocalOnly;
  throw ConfigError("unknown convolution variant '" + s + "'");
}

ApplyConvIn apply_conv_in_from_string(const std::string& s) {
  if (s == "everywhere") return ApplyConvIn::Everywhere;
  if (s == "nonlocal-region") return ApplyConvIn::NonlocalRegionOnly;
  throw ConfigError("unknown apply_conv_in setting '" + s + "'");
}

BvpConfig paper_bvp_config(ConvVariant variant, ApplyConvIn apply) {
  BvpConfig cfg;
  cfg.variant = variant;
  cfg.apply_conv_in = apply;
  return cfg;
}

BvpSolution solve_bvp_1d(const BvpConfig& cfg) {
  check(cfg);
  const double sigma = sigma_of(cfg.kernel);
  const int n = cfg.n_cells;

  // Uniform cells on each of (a, c), (c, d), (d, b), so that the inclusion
  // boundaries are cell edges at every resolution.
  BvpSolution sol;
  const std::array<double, 4> breaks{cfg.a, cfg.c, cfg.d, cfg.b};
  std::array<int, 3> counts{};
  for (int s = 0; s < 3; ++s)
    counts[s] = std::max(1, static_cast<int>(std::lround(n * (breaks[s + 1] - breaks[s]) / (cfg.b - cfg.a))));
  const auto widest = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  counts[widest] += n - (counts[0] + counts[1] + counts[2]);
  if (counts[widest] < 1) throw std::invalid_argument("bvp1d: too few cells for the inclusion geometry");
  sol.edges.push_back(cfg.a);
  for (int s = 0; s < 3; ++s) {
    for (int k = 1; k < counts[s]; ++k)
      sol.edges.push_back(breaks[s] + (breaks[s + 1] - breaks[s]) * k / counts[s]);
    sol.edges.push_back(breaks[s + 1]);
  }
  sol.midpoints.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) sol.midpoints[j] = 0.5 * (sol.edges[j] + sol.edges[j + 1]);
  sol.c_snapped = cfg.c;
  sol.d_snapped = cfg.d;

  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  for (int i = 0; i < n; ++i) {
    const double xi = sol.midpoints[i];
    sys(i, i) += cfg.eps_loc;
    sys(i, n) = -1.0;
    if (cfg.eps_nl == 0.0 || !conv_applies(cfg, sol, xi)) continue;
    for (int j = 0; j < n; ++j) {
      if (!cell_in_domain(cfg, sol, j)) continue;
      sys(i, j) += cfg.eps_nl * conv_gaussian_analytic(sigma, 0, sol.edges[j], sol.edges[j + 1], xi, 0.0);
    }
  }
  for (int j = 0; j < n; ++j) sys(n, j) = sol.edges[j + 1] - sol.edges[j];
  rhs(n) = cfg.u_a - cfg.u_b;
  if (!sys.allFinite()) throw NumericalFailure("bvp1d: non-finite system entries");

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14))
    throw NumericalFailure("bvp1d: singular system (condition estimate " + std::to_string(1.0 / rcond) + ")");
  const Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite()) throw NumericalFailure("bvp1d: non-finite solution");
  sol.residual = (sys * x - rhs).cwiseAbs().maxCoeff();

  sol.e_field.assign(x.data(), x.data() + n);
  sol.d_value = x(n);
  sol.potential.resize(static_cast<std::size_t>(n) + 1);
  sol.potential[0] = cfg.u_a;
  for (int j = 0; j < n; ++j) sol.potential[j + 1] = sol.potential[j] - sol.e_field[j] * (sol.edges[j + 1] - sol.edges[j]);
  sol.potential[n] = cfg.u_b;
  return sol;
}

double reconstruct_d(const BvpConfig& cfg, const BvpSolution& sol, double x) {
  const double sigma = sigma_of(cfg.kernel);
  const auto n = sol.e_field.size();
  const auto cell_of = [&](double v) {
    const auto it = std::upper_bound(sol.edges.begin(), sol.edges.end(), v);
    return std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - sol.edges.begin() - 1)));
  };
  // E is second-order accurate at the midpoints; interpolate linearly between
  // them without crossing a, c, d or b, where the true field may jump.
  const std::size_t cell = cell_of(x);
  const auto segment_of = [&](std::size_t j) {
    const double m = sol.midpoints[j];
    return m < sol.c_snapped ? 0 : (m < sol.d_snapped ? 1 : 2);
  };
  std::size_t lo = cell, hi = cell;
  if (x >= sol.midpoints[cell] && cell + 1 < n && segment_of(cell + 1) == segment_of(cell))
    hi = cell + 1;
  else if (x < sol.midpoints[cell] && cell > 0 && segment_of(cell - 1) == segment_of(cell))
    lo = cell - 1;
  else if (cell + 1 < n && segment_of(cell + 1) == segment_of(cell))
    hi = cell + 1;  // extrapolate at the segment end
  else if (cell > 0 && segment_of(cell - 1) == segment_of(cell))
    lo = cell - 1;
  double e = sol.e_field[cell];
  if (lo != hi) {
    const double t = (x - sol.midpoints[lo]) / (sol.midpoints[hi] - sol.midpoints[lo]);
    e = (1.0 - t) * sol.e_field[lo] + t * sol.e_field[hi];
  }
  double d = cfg.eps_loc * e;
  if (cfg.eps_nl == 0.0 || !conv_applies(cfg, sol, x)) return d;
  double conv = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    if (cell_in_domain(cfg, sol, j))
      conv += sol.e_field[j] * conv_gaussian_analytic(sigma, 0, sol.edges[j], sol.edges[j + 1], x, 0.0);
  return d + cfg.eps_nl * conv;
}

RefinementResult refine_until(BvpConfig cfg, double target_rel_change, int max_cells) {
  if (!(target_rel_change > 0.0)) throw std::invalid_argument("refine_until: target must be > 0");
  RefinementResult result;
  double previous = 0.0;
  bool have_previous = false;
  while (true) {
    BvpSolution sol = solve_bvp_1d(cfg);
    result.history.emplace_back(cfg.n_cells, sol.d_value);
    const double d = sol.d_value;
    result.solution = std::move(sol);
    if (have_previous && std::abs(d - previous) <= target_rel_change * std::abs(d)) {
      result.converged = true;
      break;
    }
    if (cfg.n_cells * 2 > max_cells) break;
    previous = d;
    have_previous = true;
    cfg.n_cells *= 2;
  }
  return result;
}

}  // namespace nltrefftz
