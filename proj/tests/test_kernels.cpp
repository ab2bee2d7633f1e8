#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nltrefftz/errors.hpp"
#include "nltrefftz/kernels.hpp"
#include "oracles.hpp"

using namespace nltrefftz;

TEST_CASE("gaussian value is unnormalized with unit peak") {
  const Kernel k = make_gaussian(0.5, 2);
  CHECK(kernel_value(k, {0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  // exp(-r^2/(2 sigma^2)) at r = sigma
  CHECK(kernel_value(k, {0.3, 0.4}) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(kernel_value(make_gaussian(1.0, 1), {1.0, 123.0}) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("gaussian derivatives agree with written-out Hermite forms") {
  for (double sigma : {0.25, 0.5, 1.0, 2.0})
    for (int n = 0; n <= 4; ++n)
      for (double t : {-1.3, -0.2, 0.0, 0.7, 2.5}) {
        // d^n/dt^n g(t/sigma) = sigma^-n g^(n)(t/sigma)
        const double expected = oracle::unit_gaussian_derivative(n, t / sigma) / std::pow(sigma, n);
        CHECK(gaussian_derivative_1d(sigma, n, t) == doctest::Approx(expected).epsilon(1e-12).scale(1.0));
      }
}

TEST_CASE("high-order gaussian derivatives match finite differences of the previous order") {
  const double sigma = 0.5;
  for (int n = 5; n <= kMaxGaussianDerivative; ++n)
    for (double t : {-0.4, 0.1, 0.9}) {
      const double fd = oracle::derivative([&](double s) { return gaussian_derivative_1d(sigma, n - 1, s); }, t, 1e-4);
      const double v = gaussian_derivative_1d(sigma, n, t);
      CHECK(std::abs(v - fd) <= 1e-6 * std::max(1.0, std::abs(v)));
    }
}

TEST_CASE("2D gaussian partials are separable") {
  const Kernel k = make_gaussian(0.7, 2);
  const Point r{0.3, -0.45};
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      CHECK(kernel_partial(k, {a, b}, r) ==
            doctest::Approx(gaussian_derivative_1d(0.7, a, r.x) * gaussian_derivative_1d(0.7, b, r.y)).epsilon(1e-13));
}

TEST_CASE("derivative order beyond the supported maximum is rejected") {
  CHECK_THROWS(kernel_partial(make_gaussian(1.0, 1), {kMaxGaussianDerivative + 1, 0}, {0.1, 0}));
}

TEST_CASE("yukawa kernel") {
  const Kernel si = make_yukawa(2.0, YukawaPrefactor::SI, 2);
  const Kernel g = make_yukawa(2.0, YukawaPrefactor::Gaussian, 2);
  const double r = 0.5;
  CHECK(kernel_value(g, {0.3, 0.4}) == doctest::Approx(std::exp(-r / 2.0) / (4.0 * r)).epsilon(1e-14));
  CHECK(kernel_value(si, {0.3, 0.4}) * 4 * M_PI == doctest::Approx(kernel_value(g, {0.3, 0.4})).epsilon(1e-14));
  CHECK_THROWS_AS(kernel_value(si, {0, 0}), std::domain_error);
  CHECK_THROWS_AS(kernel_partial(si, {1, 0}, {0.3, 0}), UnsupportedOperation);
}

TEST_CASE("truncation radius") {
  const double tol = 1e-8;
  const Kernel k = make_gaussian(0.5, 1);
  const double r = truncation_radius(k, tol);
  CHECK(r == doctest::Approx(0.5 * std::sqrt(-2 * std::log(tol))).epsilon(1e-14));
  CHECK(kernel_value(k, {r, 0}) == doctest::Approx(tol).epsilon(1e-12));
  CHECK(truncation_radius(make_yukawa(0.3, YukawaPrefactor::SI, 1), tol) ==
        doctest::Approx(-0.3 * std::log(tol)).epsilon(1e-14));
  CHECK_THROWS(truncation_radius(make_poly_test(Polynomial::constant(1, 1.0)), tol));
}

TEST_CASE("poly-test kernel evaluates its polynomial") {
  Polynomial p(1, 2);
  p.set_coeff({0, 0}, 1.0);
  p.set_coeff({2, 0}, -3.0);
  const Kernel k = make_poly_test(p);
  CHECK(kernel_value(k, {2.0, 0}) == doctest::Approx(-11.0));
  CHECK(kernel_partial(k, {1, 0}, {2.0, 0}) == doctest::Approx(-12.0));
  CHECK(kernel_partial(k, {3, 0}, {2.0, 0}) == doctest::Approx(0.0));
}

TEST_CASE("invalid kernel parameters") {
  CHECK_THROWS(make_gaussian(0.0, 1));
  CHECK_THROWS(make_gaussian(-1.0, 2));
  CHECK_THROWS(make_gaussian(1.0, 3));
  CHECK_THROWS(make_yukawa(0.0, YukawaPrefactor::SI, 1));
}

TEST_CASE("partials agree with finite differences of kernel values") {
  const Kernel k = make_gaussian(0.6, 2);
  const Point r{0.35, -0.2};
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b) {
      if (a + b == 0) continue;
      // differentiate the lower-order analytic partial once more along one axis
      const MultiIndex lower = a > 0 ? MultiIndex{a - 1, b} : MultiIndex{a, b - 1};
      const auto f = [&](double t) {
        return a > 0 ? kernel_partial(k, lower, {t, r.y}) : kernel_partial(k, lower, {r.x, t});
      };
      const double fd = oracle::derivative(f, a > 0 ? r.x : r.y, 1e-3);
      const double v = kernel_partial(k, {a, b}, r);
      CHECK(std::abs(v - fd) <= 1e-6 * std::max(1.0, std::abs(v)));
    }
  // first partials straight from values
  const double fd_x = oracle::derivative([&](double t) { return kernel_value(k, {t, r.y}); }, r.x);
  CHECK(kernel_partial(k, {1, 0}, r) == doctest::Approx(fd_x).epsilon(1e-6));
}
