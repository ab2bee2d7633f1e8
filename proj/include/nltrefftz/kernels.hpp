#pragma once

#include <variant>

#include "nltrefftz/geometry.hpp"
#include "nltrefftz/polynomial.hpp"

namespace nltrefftz {

/// exp(-|r|^2 / (2 sigma^2)), unnormalized (peak value 1).
struct GaussianKernel {
  double sigma = 1.0;
};

/// Whether the Yukawa prefactor carries the 4*pi of SI units.
enum class YukawaPrefactor { SI, Gaussian };

/// exp(-|r|/lambda) / ([4 pi] lambda^2 |r|). Evaluation only.
struct YukawaKernel {
  double lambda = 1.0;
  YukawaPrefactor prefactor = YukawaPrefactor::SI;
};

/// A polynomial used as a kernel. 1D only; for testing restricted convolution.
struct PolyTestKernel {
  Polynomial p;
};

struct Kernel {
  std::variant<GaussianKernel, YukawaKernel, PolyTestKernel> shape;
  int dim = 1;

  bool is_gaussian() const { return std::holds_alternative<GaussianKernel>(shape); }
  /// Length scale: sigma, lambda, or 1 for PolyTest.
  double length_scale() const;
};

Kernel make_gaussian(double sigma, int dim);
Kernel make_yukawa(double lambda, YukawaPrefactor prefactor, int dim);
Kernel make_poly_test(Polynomial p);

/// Highest derivative order supported by kernel_partial for Gaussians.
inline constexpr int kMaxGaussianDerivative = 16;

double kernel_value(const Kernel& k, Point r);
double kernel_partial(const Kernel& k, MultiIndex beta, Point r);

/// Smallest radius beyond which |kernel| <= tol * peak. For the singular
/// Yukawa kernel the exponential envelope exp(-r/lambda) is used as peak-normalized profile.
double truncation_radius(const Kernel& k, double tol);

/// d^n/dt^n exp(-t^2 / (2 sigma^2)) via the Hermite recurrence.
double gaussian_derivative_1d(double sigma, int n, double t);

}  // namespace nltrefftz
