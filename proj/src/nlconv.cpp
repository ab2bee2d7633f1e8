#include "nltrefftz/nlconv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nltrefftz/errors.hpp"
#include "nltrefftz/numerics.hpp"

#ifdef NLTREFFTZ_HAVE_QUADMATH
#include <quadmath.h>
#endif

namespace nltrefftz {

namespace ext {

#ifdef NLTREFFTZ_HAVE_QUADMATH
using Real = __float128;
inline Real exp(Real v) { return expq(v); }
inline Real erf(Real v) { return erfq(v); }
inline Real erfc(Real v) { return erfcq(v); }
inline Real sqrt(Real v) { return sqrtq(v); }
inline Real pi() { return M_PIq; }
#else
using Real = long double;
inline Real exp(Real v) { return std::exp(v); }
inline Real erf(Real v) { return std::erf(v); }
inline Real erfc(Real v) { return std::erfc(v); }
inline Real sqrt(Real v) { return std::sqrt(v); }
inline Real pi() { return std::numbers::pi_v<long double>; }
#endif

}  // namespace ext

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Panels covering the part of [t0, t1] (coordinates relative to the kernel
// center) where the Gaussian is not negligible. Panels are at most sigma wide
// and shrink far from the center so that the decay across one panel stays
// within a factor exp(8); beyond exp(-200) of the nearest point nothing is kept.
std::vector<std::pair<double, double>> gaussian_panels(double sigma, double t0, double t1) {
  std::vector<std::pair<double, double>> panels;
  const double nearest = t0 > 0.0 ? t0 : (t1 < 0.0 ? -t1 : 0.0);
  const double cut = std::sqrt(nearest * nearest + 400.0 * sigma * sigma);
  // walk one sign-definite piece [u0, u1] of |t| outwards
  const auto walk = [&](double u0, double u1, double sign) {
    u1 = std::min(u1, cut);
    double u = u0;
    while (u < u1) {
      const double w = std::min(sigma, 0.5 * (std::sqrt(u * u + 32.0 * sigma * sigma) - u));
      double next = u + w;
      if (next > u1 - 1e-3 * w) next = u1;
      panels.emplace_back(sign * u, sign * next);
      u = next;
    }
  };
  if (t0 >= 0.0) {
    walk(t0, t1, 1.0);
  } else if (t1 <= 0.0) {
    walk(-t1, -t0, -1.0);
  } else {
    walk(0.0, -t0, -1.0);
    walk(0.0, t1, 1.0);
  }
  return panels;
}

// m[p] = integral over [lo, hi] of g^(order)(x - s) (s - c)^p ds, p = 0..max_power.
std::vector<double> gaussian_moments(double sigma, int order, double lo, double hi, double x, double c,
                                     int max_power, int points_per_panel) {
  std::vector<double> m(static_cast<std::size_t>(max_power) + 1, 0.0);
  if (hi - lo <= 0.0) return m;
  const QuadratureRule& ref = reference_gauss_legendre(points_per_panel);
  for (const auto& [u0, u1] : gaussian_panels(sigma, lo - x, hi - x)) {
    const double mid = x + 0.5 * (u0 + u1);
    const double h = std::abs(u1 - u0);
    for (std::size_t q = 0; q < ref.size(); ++q) {
      const double s = mid + 0.5 * h * ref.nodes[q].x;
      double term = 0.5 * h * ref.weights[q] * gaussian_derivative_1d(sigma, order, x - s);
      const double ds = s - c;
      for (int p = 0; p <= max_power; ++p) {
        m[p] += term;
        term *= ds;
      }
    }
  }
  return m;
}

double conv_gaussian(double sigma, const Polynomial& f, const ConvDomain& dom, Point x, MultiIndex beta,
                     int points) {
  const int deg = std::max(f.effective_degree(), 0);
  const Point c = f.center();
  double total = 0.0;
  for (const Box& box : dom.boxes) {
    const auto mx = gaussian_moments(sigma, beta.x, box.lo.x, box.hi.x, x.x, c.x, deg, points);
    if (dom.dim == 1) {
      for (int i = 0; i <= deg; ++i) total += f.coeff({i, 0}) * mx[i];
      continue;
    }
    const auto my = gaussian_moments(sigma, beta.y, box.lo.y, box.hi.y, x.y, c.y, deg, points);
    for (const auto a : graded_multi_indices(2, deg)) {
      const double ca = f.coeff(a);
      if (ca != 0.0) total += ca * mx[a.x] * my[a.y];
    }
  }
  return total;
}

double conv_poly_exact(const Polynomial& kernel, const Polynomial& f, const ConvDomain& dom, double x,
                       MultiIndex beta) {
  // K^(beta)(x - s) = sum_k a_k (x - s - ck)^k = sum_k a_k (-1)^k (s - (x - ck))^k
  const Polynomial dk = poly_partial(kernel, beta);
  Polynomial in_s(1, dk.degree(), {x - dk.center().x, 0.0});
  for (int k = 0; k <= dk.degree(); ++k) in_s.set_coeff({k, 0}, (k % 2 == 0 ? 1.0 : -1.0) * dk.coeff({k, 0}));
  const Polynomial integrand = in_s * f;
  double total = 0.0;
  for (const Box& box : dom.boxes) total += integrate_1d(integrand, box.lo.x, box.hi.x);
  return total;
}

}  // namespace

double ConvDomain::measure() const {
  double m = 0.0;
  for (const Box& b : boxes) m += b.measure(dim);
  return m;
}

ConvDomain ConvDomain::shifted(Point v) const {
  ConvDomain out = *this;
  for (Box& b : out.boxes) b = b.shifted(dim == 1 ? Point{v.x, 0.0} : v);
  return out;
}

ConvDomain interval_domain(double a, double b) { return {1, {Box{{a, 0.0}, {b, 0.0}}}}; }

ConvDomain box_domain(const Box& box) { return {2, {box}}; }

void validate(const ConvDomain& dom) {
  if (dom.dim != 1 && dom.dim != 2) throw std::invalid_argument("convolution domain dimension must be 1 or 2");
  for (const Box& b : dom.boxes) {
    if (!(b.width(0) > 0.0) || (dom.dim == 2 && !(b.width(1) > 0.0)))
      throw std::invalid_argument("convolution domain box has non-positive extent");
  }
  for (std::size_t i = 0; i < dom.boxes.size(); ++i)
    for (std::size_t j = i + 1; j < dom.boxes.size(); ++j) {
      const Box& p = dom.boxes[i];
      const Box& q = dom.boxes[j];
      bool overlap = std::min(p.hi.x, q.hi.x) > std::max(p.lo.x, q.lo.x);
      if (dom.dim == 2) overlap = overlap && std::min(p.hi.y, q.hi.y) > std::max(p.lo.y, q.lo.y);
      if (overlap) throw std::invalid_argument("convolution domain boxes overlap");
    }
  if (!(dom.measure() > 0.0)) throw std::invalid_argument("convolution domain has zero measure");
}

void validate(const ConvConfig& cfg) {
  if (!(cfg.eps_loc > 0.0)) throw std::invalid_argument("eps_loc must be > 0");
  if (!(cfg.eps_nl >= 0.0)) throw std::invalid_argument("eps_nl must be >= 0");
  if (cfg.quad_points_per_sigma < 4) throw std::invalid_argument("quad_points_per_sigma must be >= 4");
  if (cfg.eps_nl > 0.0) {
    validate(cfg.conv_domain);
    if (cfg.conv_domain.dim != cfg.kernel.dim) throw std::invalid_argument("kernel and domain dimensions differ");
  }
}

double conv_restricted(const Kernel& k, const Polynomial& f, const ConvDomain& dom, Point x, MultiIndex beta,
                       int quad_points_per_sigma) {
  if (f.dim() != dom.dim || k.dim != dom.dim)
    throw std::invalid_argument("conv_restricted: dimension mismatch");
  if (!std::isfinite(x.x) || !std::isfinite(x.y)) throw std::invalid_argument("conv_restricted: non-finite point");
  if (const auto* g = std::get_if<GaussianKernel>(&k.shape)) {
    if (beta.x > kMaxGaussianDerivative || beta.y > kMaxGaussianDerivative)
      throw UnsupportedOperation("gaussian derivative order out of range");
    return conv_gaussian(g->sigma, f, dom, x, beta, quad_points_per_sigma);
  }
  if (const auto* p = std::get_if<PolyTestKernel>(&k.shape)) return conv_poly_exact(p->p, f, dom, x.x, beta);
  throw UnsupportedOperation("restricted convolution is not supported for the yukawa kernel");
}

namespace {

// p = 0 needs neither the recurrence nor the shift, so double precision is enough.
double gaussian_mass(double sigma, double a, double b, double x) {
  const double root2s = std::numbers::sqrt2 * sigma;
  const double pref = sigma * std::sqrt(std::numbers::pi / 2.0);
  const double ta = a - x, tb = b - x;
  if (ta >= 0.0) return pref * (std::erfc(ta / root2s) - std::erfc(tb / root2s));
  if (tb <= 0.0) return pref * (std::erfc(-tb / root2s) - std::erfc(-ta / root2s));
  return pref * (std::erf(tb / root2s) - std::erf(ta / root2s));
}

}  // namespace

double conv_gaussian_analytic(double sigma, int p, double a, double b, double x, double c) {
  if (p < 0 || p > 8) throw std::invalid_argument("conv_gaussian_analytic: power must be in [0, 8]");
  if (!(a <= b)) throw std::invalid_argument("conv_gaussian_analytic: need a <= b");
  if (p == 0) return gaussian_mass(sigma, a, b, x);
  // Far from the kernel center the shift expansion below cancels heavily,
  // so the whole evaluation runs in extended precision.
  using R = ext::Real;
  // t = x' - x, (x' - c)^p = sum_j C(p,j) (x - c)^(p-j) t^j
  const bool inf_a = std::isinf(a), inf_b = std::isinf(b);
  const R ta = inf_a ? R(0) : R(a) - R(x);
  const R tb = inf_b ? R(0) : R(b) - R(x);
  const R s = sigma;
  const R s2 = s * s;
  const R root2s = ext::sqrt(R(2)) * s;
  const auto gauss = [&](R t, bool inf) { return inf ? R(0) : ext::exp(-t * t / (R(2) * s2)); };
  const auto tpow_gauss = [&](R t, bool inf, int k) {
    R pw = 1;
    for (int i = 0; i < k; ++i) pw *= t;
    return inf ? R(0) : pw * gauss(t, false);
  };
  // erf-type values at the endpoints, with infinities mapped to +-1
  const auto erf_at = [&](R t, bool inf, int sign) { return inf ? R(sign) : ext::erf(t / root2s); };
  const auto erfc_at = [&](R t, bool inf) { return inf ? R(0) : ext::erfc(t / root2s); };

  std::vector<R> moment(static_cast<std::size_t>(p) + 1);
  const R pref0 = s * ext::sqrt(ext::pi() / R(2));
  if (!inf_a && ta >= 0)
    moment[0] = pref0 * (erfc_at(ta, false) - erfc_at(tb, inf_b));
  else if (!inf_b && tb <= 0)
    moment[0] = pref0 * (erfc_at(-tb, false) - erfc_at(-ta, inf_a));
  else
    moment[0] = pref0 * (erf_at(tb, inf_b, 1) - erf_at(ta, inf_a, -1));
  if (p >= 1) moment[1] = s2 * (gauss(ta, inf_a) - gauss(tb, inf_b));
  for (int j = 2; j <= p; ++j)
    moment[j] = s2 * (R(j - 1) * moment[j - 2] + tpow_gauss(ta, inf_a, j - 1) - tpow_gauss(tb, inf_b, j - 1));

  const R shift = R(x) - R(c);
  R total = 0;
  R shift_pow = 1;
  for (int j = p; j >= 0; --j) {
    total += R(binomial(p, j)) * shift_pow * moment[j];
    shift_pow *= shift;
  }
  return static_cast<double>(total);
}

double d_component_partial(const ConvConfig& cfg, const Polynomial& u, int component, Point x, MultiIndex beta) {
  if (component < 0 || component >= u.dim()) throw std::invalid_argument("field component out of range");
  Polynomial e = poly_partial(u, unit_index(component));
  e *= -1.0;
  double value = cfg.eps_loc * poly_partial(e, beta)(x);
  if (cfg.eps_nl != 0.0 && !e.is_zero())
    value += cfg.eps_nl * conv_restricted(cfg.kernel, e, cfg.conv_domain, x, beta, cfg.quad_points_per_sigma);
  return value;
}

Vector2 d_field(const ConvConfig& cfg, const Polynomial& u, Point x) {
  Vector2 d{0.0, 0.0};
  for (int i = 0; i < u.dim(); ++i) d[i] = d_component_partial(cfg, u, i, x, {});
  return d;
}

double div_d_derivative(const ConvConfig& cfg, const Polynomial& u, Point x0, MultiIndex gamma) {
  double total = 0.0;
  for (int i = 0; i < u.dim(); ++i) total += d_component_partial(cfg, u, i, x0, gamma + unit_index(i));
  return total;
}

}  // namespace nltrefftz
