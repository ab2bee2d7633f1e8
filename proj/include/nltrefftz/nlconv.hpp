#pragma once

#include <vector>

#include "nltrefftz/geometry.hpp"
#include "nltrefftz/kernels.hpp"
#include "nltrefftz/polynomial.hpp"

namespace nltrefftz {

/// Integration domain of a restricted convolution: a union of boxes that
/// overlap at most on their boundaries.
struct ConvDomain {
  int dim = 1;
  std::vector<Box> boxes;

  double measure() const;
  ConvDomain shifted(Point v) const;
};

ConvDomain interval_domain(double a, double b);
ConvDomain box_domain(const Box& box);
/// Throws std::invalid_argument on empty/degenerate or overlapping boxes.
void validate(const ConvDomain& dom);

inline constexpr int kDefaultQuadPointsPerSigma = 12;

/// Constitutive configuration D = eps_loc E + eps_nl (kernel *_dom E).
struct ConvConfig {
  double eps_loc = 1.0;
  double eps_nl = 0.0;
  Kernel kernel;
  ConvDomain conv_domain;
  /// Gauss-Legendre points per panel; panels are at most one kernel length wide.
  int quad_points_per_sigma = kDefaultQuadPointsPerSigma;
};

void validate(const ConvConfig& cfg);

/// d^beta/dx^beta of the integral over `dom` of kernel(x - x') f(x') dx'.
/// The derivative is always taken on the kernel (the domain is fixed).
/// Gaussian kernels use panel Gauss-Legendre quadrature, one separable
/// 1D factor per axis; polynomial kernels are integrated exactly.
double conv_restricted(const Kernel& k, const Polynomial& f, const ConvDomain& dom, Point x, MultiIndex beta = {},
                       int quad_points_per_sigma = kDefaultQuadPointsPerSigma);

/// Closed form of the integral over [a, b] of exp(-(x - x')^2 / (2 sigma^2)) (x' - c)^p dx'
/// from incomplete Gaussian moments. p <= 8.
double conv_gaussian_analytic(double sigma, int p, double a, double b, double x, double c);

/// D(x) for potential u (E = -grad u). Components beyond dim are zero.
Vector2 d_field(const ConvConfig& cfg, const Polynomial& u, Point x);

/// d^beta D_component(x).
double d_component_partial(const ConvConfig& cfg, const Polynomial& u, int component, Point x, MultiIndex beta);

/// d^gamma (div D)(x0).
double div_d_derivative(const ConvConfig& cfg, const Polynomial& u, Point x0, MultiIndex gamma = {});

}  // namespace nltrefftz
