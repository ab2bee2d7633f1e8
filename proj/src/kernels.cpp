#include "nltrefftz/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nltrefftz/errors.hpp"

namespace nltrefftz {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double radius(Point r, int dim) { return dim == 1 ? std::abs(r.x) : std::hypot(r.x, r.y); }

}  // namespace

double Kernel::length_scale() const {
  return std::visit(Overloaded{[](const GaussianKernel& g) { return g.sigma; },
                               [](const YukawaKernel& y) { return y.lambda; },
                               [](const PolyTestKernel&) { return 1.0; }},
                    shape);
}

Kernel make_gaussian(double sigma, int dim) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("gaussian sigma must be > 0");
  if (dim != 1 && dim != 2) throw std::invalid_argument("kernel dimension must be 1 or 2");
  return {GaussianKernel{sigma}, dim};
}

Kernel make_yukawa(double lambda, YukawaPrefactor prefactor, int dim) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("yukawa lambda must be > 0");
  if (dim != 1 && dim != 2) throw std::invalid_argument("kernel dimension must be 1 or 2");
  return {YukawaKernel{lambda, prefactor}, dim};
}

Kernel make_poly_test(Polynomial p) {
  if (p.dim() != 1) throw std::invalid_argument("polynomial test kernels are 1D only");
  return {PolyTestKernel{std::move(p)}, 1};
}

double gaussian_derivative_1d(double sigma, int n, double t) {
  if (n < 0 || n > kMaxGaussianDerivative)
    throw UnsupportedOperation("gaussian derivative order out of range: " + std::to_string(n));
  // d^n/dt^n exp(-s^2/2) = (-1)^n He_n(s) exp(-s^2/2), s = t / sigma.
  const double s = t / sigma;
  double he_prev = 1.0;
  double he = s;
  if (n == 0) he = 1.0;
  for (int k = 1; k < n; ++k) {
    const double next = s * he - k * he_prev;
    he_prev = he;
    he = next;
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * he * std::pow(sigma, -n) * std::exp(-0.5 * s * s);
}

double kernel_value(const Kernel& k, Point r) {
  if (!std::isfinite(r.x) || (k.dim == 2 && !std::isfinite(r.y)))
    throw std::invalid_argument("kernel argument must be finite");
  return std::visit(
      Overloaded{[&](const GaussianKernel& g) {
                   const double r2 = k.dim == 1 ? r.x * r.x : r.x * r.x + r.y * r.y;
                   return std::exp(-r2 / (2.0 * g.sigma * g.sigma));
                 },
                 [&](const YukawaKernel& y) {
                   const double rr = radius(r, k.dim);
                   if (rr == 0.0) throw std::domain_error("yukawa kernel is singular at r = 0");
                   const double pref = y.prefactor == YukawaPrefactor::SI ? 4.0 * std::numbers::pi : 1.0;
                   return std::exp(-rr / y.lambda) / (pref * y.lambda * y.lambda * rr);
                 },
                 [&](const PolyTestKernel& p) { return p.p(r); }},
      k.shape);
}

double kernel_partial(const Kernel& k, MultiIndex beta, Point r) {
  if (beta.x < 0 || beta.y < 0) throw std::invalid_argument("negative derivative order");
  if (k.dim == 1 && beta.y != 0) throw std::invalid_argument("y-derivative of a 1D kernel");
  return std::visit(
      Overloaded{[&](const GaussianKernel& g) {
                   double v = gaussian_derivative_1d(g.sigma, beta.x, r.x);
                   if (k.dim == 2) v *= gaussian_derivative_1d(g.sigma, beta.y, r.y);
                   return v;
                 },
                 [&](const YukawaKernel&) -> double {
                   throw UnsupportedOperation("yukawa kernel derivatives are not supported");
                 },
                 [&](const PolyTestKernel& p) { return poly_partial(p.p, beta)(r); }},
      k.shape);
}

double truncation_radius(const Kernel& k, double tol) {
  if (!(tol > 0.0 && tol <= 1.0)) throw std::invalid_argument("truncation tolerance must lie in (0, 1]");
  return std::visit(Overloaded{[&](const GaussianKernel& g) {
                                 return tol == 1.0 ? 0.0 : g.sigma * std::sqrt(-2.0 * std::log(tol));
                               },
                               [&](const YukawaKernel& y) { return -y.lambda * std::log(tol); },
                               [&](const PolyTestKernel&) -> double {
                                 throw UnsupportedOperation("polynomial kernels have unbounded support");
                               }},
                    k.shape);
}

}  // namespace nltrefftz
