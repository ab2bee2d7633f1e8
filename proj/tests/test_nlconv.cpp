#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nltrefftz/errors.hpp"
#include "nltrefftz/nlconv.hpp"
#include "oracles.hpp"

using namespace nltrefftz;

namespace {

Polynomial poly1d(std::initializer_list<double> c, double center = 0.0) {
  Polynomial p(1, static_cast<int>(c.size()) - 1, {center, 0});
  int i = 0;
  for (double v : c) p.set_coeff({i++, 0}, v);
  return p;
}

}  // namespace

TEST_CASE("restricted convolution is not commutative") {
  const ConvDomain unit = interval_domain(0, 1);
  const Kernel one = make_poly_test(poly1d({1}));
  const Kernel ramp = make_poly_test(poly1d({0, 1}));
  for (int i = 0; i < 20; ++i) {
    const double x = -2.0 + 0.23 * i;
    CHECK(conv_restricted(one, poly1d({0, 1}), unit, {x, 0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(conv_restricted(ramp, poly1d({1}), unit, {x, 0}) - (x - 0.5)) <= 1e-12);
  }
}

TEST_CASE("derivative does not move onto the field") {
  const ConvDomain unit = interval_domain(0, 1);
  const Kernel ramp = make_poly_test(poly1d({0, 1}));
  for (double x : {-1.0, 0.3, 4.0}) {
    CHECK(conv_restricted(ramp, poly1d({1}), unit, {x, 0}, {1, 0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(conv_restricted(ramp, poly_partial(poly1d({1}), {1, 0}), unit, {x, 0}) == doctest::Approx(0.0));
  }
}

TEST_CASE("poly-test kernels of higher degree match Simpson") {
  const Kernel k = make_poly_test(poly1d({0.5, -1, 0, 2}));
  const Polynomial f = poly1d({1, 2, -0.5}, 0.3);
  const double a = -0.7, b = 1.9, x = 0.45;
  const double ref = oracle::simpson([&](double t) { return kernel_value(k, {x - t, 0}) * f({t, 0}); }, a, b, 2000);
  CHECK(conv_restricted(k, f, interval_domain(a, b), {x, 0}) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("closed-form gaussian moments match brute-force Simpson") {
  for (double sigma : {0.25, 0.5, 1.0})
    for (int p = 0; p <= 8; p += 2)
      for (double x : {-0.8, 0.4, 2.7}) {
        const double a = -1.0, b = 1.5, c = 0.2;
        const double ref = oracle::gaussian_moment(sigma, p, a, b, x, c);
        const double v = conv_gaussian_analytic(sigma, p, a, b, x, c);
        CHECK(std::abs(v - ref) <= 1e-10 * std::max(1e-3, std::abs(ref)));
      }
}

TEST_CASE("quadrature agrees with the closed form on randomized cases") {
  std::mt19937 gen(20240611);
  std::uniform_int_distribution<int> deg(0, 6), pick(0, 2);
  std::uniform_real_distribution<double> u(-3, 3), len(0.1, 6);
  const double sigmas[] = {0.25, 0.5, 1.0};
  for (int i = 0; i < 50; ++i) {
    const double sigma = sigmas[pick(gen)];
    const int p = deg(gen);
    const double a = u(gen), b = a + len(gen), x = u(gen), c = u(gen);
    const double ref = conv_gaussian_analytic(sigma, p, a, b, x, c);
    const double q = conv_restricted(make_gaussian(sigma, 1), Polynomial::monomial(1, {p, 0}, {c, 0}),
                                     interval_domain(a, b), {x, 0});
    CHECK(std::abs(q - ref) <= 1e-10 * std::abs(ref));
  }
}

TEST_CASE("kernel derivatives match finite differences in x") {
  const Kernel k = make_gaussian(0.5, 1);
  const Polynomial f = poly1d({0.3, -1, 0.5, 0.25});
  const ConvDomain dom = interval_domain(-1, 2);
  for (double x : {-1.5, 0.0, 0.8, 2.4}) {
    const auto g = [&](double s) { return conv_restricted(k, f, dom, {s, 0}); };
    CHECK(conv_restricted(k, f, dom, {x, 0}, {1, 0}) == doctest::Approx(oracle::derivative(g, x, 1e-3)).epsilon(1e-8));
    const auto g1 = [&](double s) { return conv_restricted(k, f, dom, {s, 0}, {1, 0}); };
    CHECK(conv_restricted(k, f, dom, {x, 0}, {2, 0}) == doctest::Approx(oracle::derivative(g1, x, 1e-3)).epsilon(1e-8));
  }
}

TEST_CASE("linearity and domain additivity") {
  const Kernel k = make_gaussian(0.5, 1);
  const Polynomial f = poly1d({1, 2, 3});
  const Polynomial g = poly1d({-1, 0, 0, 1}, 0.5);
  const Point x{0.6, 0};
  const ConvDomain dom = interval_domain(-1, 2);
  CHECK(conv_restricted(k, 2.0 * f + g, dom, x) ==
        doctest::Approx(2 * conv_restricted(k, f, dom, x) + conv_restricted(k, g, dom, x)).epsilon(1e-13));
  ConvDomain split;
  split.boxes = {Box{{-1, 0}, {0.4, 0}}, Box{{0.4, 0}, {2, 0}}};
  CHECK(conv_restricted(k, f, split, x) == doctest::Approx(conv_restricted(k, f, dom, x)).epsilon(1e-13));
}

TEST_CASE("2D box convolution matches tensor Simpson") {
  const Kernel k = make_gaussian(0.5, 2);
  Polynomial f(2, 2, {0.1, -0.2});
  f.set_coeff({0, 0}, 1.0);
  f.set_coeff({1, 1}, -2.0);
  f.set_coeff({0, 2}, 0.5);
  const Box box{{-1, -0.5}, {1.5, 1.0}};
  const Point x{0.3, 0.2};
  const double ref = oracle::simpson2d(
      [&](double s, double t) { return kernel_value(k, {x.x - s, x.y - t}) * f({s, t}); }, box.lo.x, box.hi.x, box.lo.y,
      box.hi.y, 600);
  CHECK(conv_restricted(k, f, box_domain(box), x) == doctest::Approx(ref).epsilon(1e-10));
  const double ref_dx = oracle::simpson2d(
      [&](double s, double t) { return kernel_partial(k, {1, 0}, {x.x - s, x.y - t}) * f({s, t}); }, box.lo.x, box.hi.x,
      box.lo.y, box.hi.y, 600);
  CHECK(conv_restricted(k, f, box_domain(box), x, {1, 0}) == doctest::Approx(ref_dx).epsilon(1e-10));
}

TEST_CASE("quadrature refinement does not change results") {
  const Kernel k = make_gaussian(0.25, 2);
  const Polynomial f = Polynomial::monomial(2, {3, 2}, {0.1, 0.1});
  const ConvDomain dom = box_domain({{-2, -2}, {2, 2}});
  const double coarse = conv_restricted(k, f, dom, {0.4, -0.3}, {1, 1});
  const double fine = conv_restricted(k, f, dom, {0.4, -0.3}, {1, 1}, 24);
  CHECK(std::abs(coarse - fine) <= 1e-12 * std::abs(fine));
}

TEST_CASE("yukawa convolution is unsupported") {
  const Kernel y = make_yukawa(1.0, YukawaPrefactor::SI, 1);
  CHECK_THROWS_AS(conv_restricted(y, poly1d({1}), interval_domain(0, 1), {0.5, 0}), UnsupportedOperation);
}

TEST_CASE("domain validation") {
  ConvDomain bad;
  bad.boxes = {Box{{1, 0}, {0, 0}}};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  ConvDomain overlap;
  overlap.boxes = {Box{{0, 0}, {1, 0}}, Box{{0.5, 0}, {2, 0}}};
  CHECK_THROWS_AS(validate(overlap), std::invalid_argument);
  CHECK(interval_domain(-1, 2).measure() == doctest::Approx(3.0));
}

TEST_CASE("constitutive law in 1D") {
  ConvConfig cfg;
  cfg.eps_loc = 2.0;
  cfg.eps_nl = 3.0;
  cfg.kernel = make_gaussian(0.5, 1);
  cfg.conv_domain = interval_domain(0, 3);
  const Polynomial u = poly1d({0, 1, -0.5, 0.2});  // E = -(1 - x + 0.6 x^2)
  const double x = 1.2;
  const auto e = [](double t) { return -(1 - t + 0.6 * t * t); };
  const double conv = oracle::simpson([&](double t) { return std::exp(-(x - t) * (x - t) / 0.5) * e(t); }, 0, 3);
  const Vector2 d = d_field(cfg, u, {x, 0});
  CHECK(d[0] == doctest::Approx(2.0 * e(x) + 3.0 * conv).epsilon(1e-10));
  CHECK(d[1] == 0.0);
  const auto dx = [&](double s) { return d_field(cfg, u, {s, 0})[0]; };
  CHECK(div_d_derivative(cfg, u, {x, 0}) == doctest::Approx(oracle::derivative(dx, x)).epsilon(1e-8));
}

TEST_CASE("local law reduces to minus eps times the laplacian") {
  ConvConfig cfg;
  cfg.eps_loc = 1.5;
  cfg.eps_nl = 0.0;
  cfg.kernel = make_gaussian(0.5, 2);
  cfg.conv_domain = box_domain({{-3, -3}, {3, 3}});
  Polynomial u(2, 3);
  u.set_coeff({2, 0}, 1.0);
  u.set_coeff({1, 2}, 0.5);
  const Point x{0.3, 0.7};
  CHECK(div_d_derivative(cfg, u, x) == doctest::Approx(-1.5 * laplacian(u)(x)).epsilon(1e-13));
  CHECK(div_d_derivative(cfg, u, x, {1, 0}) == doctest::Approx(-1.5 * poly_partial(laplacian(u), {1, 0})(x)));
}

TEST_CASE("2D divergence derivative matches finite differences") {
  ConvConfig cfg;
  cfg.eps_loc = 1.0;
  cfg.eps_nl = 10.0;
  cfg.kernel = make_gaussian(0.5, 2);
  cfg.conv_domain = box_domain({{-1.5, -1.5}, {1.5, 1.5}});
  Polynomial u(2, 3);
  u.set_coeff({3, 0}, 1.0);
  u.set_coeff({1, 1}, -2.0);
  u.set_coeff({0, 2}, 0.5);
  const Point x{0.2, -0.1};
  const auto div = [&](double s) { return div_d_derivative(cfg, u, {s, x.y}); };
  CHECK(div_d_derivative(cfg, u, x, {1, 0}) == doctest::Approx(oracle::derivative(div, x.x)).epsilon(1e-7));
  const auto dsum = [&](Point p) {
    const auto fx = [&](double s) { return d_field(cfg, u, {s, p.y})[0]; };
    const auto fy = [&](double t) { return d_field(cfg, u, {p.x, t})[1]; };
    return oracle::derivative(fx, p.x) + oracle::derivative(fy, p.y);
  };
  CHECK(div_d_derivative(cfg, u, x) == doctest::Approx(dsum(x)).epsilon(1e-7));
}
