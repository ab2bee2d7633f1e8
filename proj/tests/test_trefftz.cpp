#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nltrefftz/errors.hpp"
#include "nltrefftz/io.hpp"
#include "nltrefftz/trefftz.hpp"
#include "oracles.hpp"

using namespace nltrefftz;

namespace {

ConvConfig config_1d() {
  ConvConfig cfg;
  cfg.eps_loc = 1.0;
  cfg.eps_nl = 10.0;
  cfg.kernel = make_gaussian(0.5, 1);
  cfg.conv_domain = interval_domain(0.0, 1.5 + truncation_radius(cfg.kernel, std::exp(-18.0)));
  return cfg;
}

const Box kBox1d{{0.5, 0}, {1.5, 0}};

ConvConfig config_2d(double eps_nl = 10.0) {
  ConvConfig cfg;
  cfg.eps_loc = 1.0;
  cfg.eps_nl = eps_nl;
  cfg.kernel = make_gaussian(0.5, 2);
  cfg.conv_domain = box_domain({{-3, -3}, {3, 3}});
  return cfg;
}

const Box kBox2d{{-0.5, -0.5}, {0.5, 0.5}};

/// Coefficients of p (degree <= n) in graded-lex monomials about the origin.
Eigen::VectorXd monomial_coeffs(const Polynomial& p, int n) {
  const Polynomial q = p.recentered({0, 0}).widened(n);
  const auto idx = graded_multi_indices(2, n);
  Eigen::VectorXd v(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) v(static_cast<Eigen::Index>(i)) = q.coeff(idx[i]);
  return v;
}

}  // namespace

TEST_CASE("1D: four monomials under two constraints leave three functions") {
  const TrefftzSet ts = build_trefftz_bulk(config_1d(), 4, {1, 0}, 1, kBox1d);
  CHECK(ts.size() == 3);
  CHECK(ts.basis_size() == 5);
  CHECK(ts.constraint_labels.size() == 2);
  for (double r : ts.residuals) CHECK(r <= 1e-8 * ts.residual_scale);
  const Eigen::MatrixXd gram = ts.coeffs * ts.coeffs.transpose();
  CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
  // the constant potential is always pseudoharmonic and comes first
  CHECK(std::abs(ts.coeffs(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("1D: constraints hold when rechecked through the constitutive law") {
  const ConvConfig cfg = config_1d();
  const TrefftzSet ts = build_trefftz_bulk(cfg, 4, {1, 0}, 1, kBox1d);
  for (Eigen::Index f = 0; f < ts.size(); ++f) {
    const Polynomial u = trefftz_potential(ts, f);
    const auto d = [&](double x) { return d_field(cfg, u, {x, 0})[0]; };
    CHECK(std::abs(oracle::derivative(d, 1.0)) <= 1e-7 * ts.residual_scale);
    const auto dd = [&](double x) { return oracle::derivative(d, x); };
    CHECK(std::abs(oracle::derivative(dd, 1.0, 1e-2)) <= 1e-5 * ts.residual_scale);
  }
}

TEST_CASE("1D: literal constraint indexing drops the highest order") {
  const TrefftzSet ts = build_trefftz_bulk(config_1d(), 4, {1, 0}, 1, kBox1d, {ConstraintIndexing::PaperLiteral});
  CHECK(ts.size() == 4);
  CHECK(constraint_orders(1, 1, ConstraintIndexing::PaperLiteral).size() == 1);
  CHECK(constraint_orders(2, 2, ConstraintIndexing::UpToM).size() == 6);
  CHECK(constraint_orders(2, 0, ConstraintIndexing::PaperLiteral).empty());
}

TEST_CASE("constraint system matches the oracle null space") {
  const ConvConfig cfg = config_2d();
  const auto basis = monomial_basis(2, 4);
  const ConstraintSystem sys = build_constraints(cfg, basis, {0, 0}, 2);
  CHECK(sys.matrix.rows() == 6);
  CHECK(sys.matrix.cols() == 15);
  CHECK(sys.raw.rows() == 6);
  for (Eigen::Index i = 0; i < sys.matrix.rows(); ++i) CHECK(sys.matrix.row(i).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  // rows are the divergence derivatives of each basis function
  CHECK(sys.raw(3, 9) == doctest::Approx(div_d_derivative(cfg, basis[9], {0, 0}, {2, 0})).epsilon(1e-14));
  const TrefftzSet ts = build_trefftz_bulk(cfg, 4, {0, 0}, 2, kBox2d);
  CHECK(ts.size() == 9);
  CHECK(oracle::span_distance(ts.coeffs.transpose(), oracle::rref_null_space(sys.matrix)) <= 1e-8);
}

TEST_CASE("2D: every function is pseudoharmonic at x0") {
  const ConvConfig cfg = config_2d();
  const TrefftzSet ts = build_trefftz_bulk(cfg, 4, {0, 0}, 2, kBox2d);
  REQUIRE(ts.size() > 0);
  for (Eigen::Index f = 0; f < ts.size(); ++f) {
    const Polynomial u = trefftz_potential(ts, f);
    for (const auto g : graded_multi_indices(2, 2))
      CHECK(std::abs(div_d_derivative(cfg, u, {0, 0}, g)) <= 1e-8 * ts.residual_scale);
    // the field evaluator agrees at x0
    const auto div = evaluate_trefftz(ts, f, FieldKind::DivD, {{0, 0}});
    CHECK(std::abs(div(0, 0)) <= 1e-8 * ts.residual_scale);
  }
}

TEST_CASE("2D: purely local media give the harmonic polynomials") {
  ConvConfig cfg = config_2d(0.0);
  for (int n = 2; n <= 5; ++n) {
    const TrefftzSet ts = build_trefftz_bulk(cfg, n, {0, 0}, n - 2, kBox2d);
    CHECK(ts.size() == 2 * n + 1);
    for (Eigen::Index f = 0; f < ts.size(); ++f) {
      const Polynomial lap = laplacian(trefftz_potential(ts, f));
      for (double c : lap.coeffs()) CHECK(std::abs(c) <= 1e-10);
    }
  }
}

TEST_CASE("2D: lower-degree sets nest inside higher-degree sets") {
  const ConvConfig cfg = config_2d();
  const TrefftzSet lo = build_trefftz_bulk(cfg, 3, {0, 0}, 2, kBox2d);
  const TrefftzSet hi = build_trefftz_bulk(cfg, 4, {0, 0}, 2, kBox2d);
  for (Eigen::Index f = 0; f < lo.size(); ++f) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(hi.basis_size());
    v.head(lo.basis_size()) = lo.coeffs.row(f).transpose();
    const Eigen::VectorXd proj = hi.coeffs.transpose() * (hi.coeffs * v);
    CHECK((v - proj).norm() <= 1e-8);
  }
}

TEST_CASE("translation covariance") {
  const ConvConfig cfg = config_2d();
  const Point shift{1.25, -0.75};
  ConvConfig moved = cfg;
  moved.conv_domain = cfg.conv_domain.shifted(shift);
  const TrefftzSet a = build_trefftz_bulk(cfg, 4, {0, 0}, 2, kBox2d);
  const TrefftzSet b = build_trefftz_bulk(moved, 4, shift, 2, kBox2d.shifted(shift));
  REQUIRE(a.size() == b.size());
  CHECK((a.coeffs - b.coeffs).cwiseAbs().maxCoeff() <= 1e-9);
  const auto ua = evaluate_trefftz(a, 3, FieldKind::D, {{0.2, 0.1}});
  const auto ub = evaluate_trefftz(b, 3, FieldKind::D, {{0.2 + shift.x, 0.1 + shift.y}});
  CHECK((ua - ub).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("mirror symmetry of a symmetric configuration") {
  // Reflecting y -> -y maps the set to itself: its span is closed under the reflection.
  const TrefftzSet ts = build_trefftz_bulk(config_2d(), 4, {0, 0}, 2, kBox2d);
  const auto idx = graded_multi_indices(2, 4);
  Eigen::VectorXd sign(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) sign(static_cast<Eigen::Index>(i)) = idx[i].y % 2 ? -1.0 : 1.0;
  for (Eigen::Index f = 0; f < ts.size(); ++f) {
    const Eigen::VectorXd v = ts.coeffs.row(f).transpose().cwiseProduct(sign);
    CHECK((v - ts.coeffs.transpose() * (ts.coeffs * v)).norm() <= 1e-8);
  }
}

TEST_CASE("construction is deterministic") {
  const TrefftzSet a = build_trefftz_bulk(config_2d(), 4, {0, 0}, 2, kBox2d);
  const TrefftzSet b = build_trefftz_bulk(config_2d(), 4, {0, 0}, 2, kBox2d);
  CHECK(a.coeffs == b.coeffs);
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("json round trip is exact") {
  const TrefftzSet a = build_trefftz_bulk(config_2d(), 4, {0, 0}, 2, kBox2d);
  const TrefftzSet b = trefftz_set_from_json(json::parse(to_json(a).dump()));
  CHECK(a.coeffs == b.coeffs);
  CHECK(a.residuals == b.residuals);
  CHECK(b.cfg.eps_nl == a.cfg.eps_nl);
  CHECK(b.cfg.kernel.length_scale() == a.cfg.kernel.length_scale());
  CHECK(to_json(b).dump() == to_json(a).dump());
}

TEST_CASE("preconditions") {
  ConvConfig cfg = config_2d();
  cfg.conv_domain = box_domain({{-0.2, -0.2}, {0.2, 0.2}});
  CHECK_THROWS(build_trefftz_bulk(cfg, 4, {0, 0}, 2, kBox2d));
  CHECK_THROWS(build_trefftz_bulk(config_2d(), 4, {2, 2}, 2, kBox2d));
  CHECK_THROWS(build_trefftz_bulk(config_2d(), -1, {0, 0}, 2, kBox2d));
  // degree 0 with constraints: the constant survives
  CHECK(build_trefftz_bulk(config_2d(), 0, {0, 0}, 2, kBox2d).size() == 1);
}

TEST_CASE("canonical basis") {
  Eigen::MatrixXd n(3, 2);
  n << 1, 0, 0, 1, 0, 0;
  const Eigen::MatrixXd rotated = n * Eigen::Rotation2Dd(0.7).toRotationMatrix();
  const Eigen::MatrixXd a = canonical_basis(n), b = canonical_basis(rotated);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(a(0, 0) == doctest::Approx(1.0));
  Eigen::VectorXd seed(3);
  seed << 0, 1, 0;
  CHECK(canonical_basis(n, {seed})(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("interface: local media reproduce global harmonic polynomials") {
  const ConvConfig cfg = config_2d(0.0);
  InterfaceOptions opts;
  opts.trefftz_domain = kBox2d;
  ConvConfig nl = cfg;
  nl.conv_domain = interface_conv_domain(kBox2d, cfg.kernel);
  const TrefftzSet ts = build_trefftz_interface_2d(nl, 1.0, 4, 2, 2, opts);
  const auto basis = basis_functions(ts);
  const std::size_t nloc = local_block_size(ts);
  CHECK(nloc == 9);
  CHECK(basis.size() == 24);
  Eigen::MatrixXd local(15, static_cast<Eigen::Index>(nloc));
  for (std::size_t j = 0; j < nloc; ++j) local.col(static_cast<Eigen::Index>(j)) = monomial_coeffs(basis[j], 4);
  for (const Polynomial& h : harmonic_basis_2d(4, {0.2, -0.1})) {
    const Eigen::VectorXd hm = monomial_coeffs(h, 4);
    Eigen::VectorXd v(24);
    v.head(9) = local.colPivHouseholderQr().solve(hm);
    v.tail(15) = hm;
    const Eigen::VectorXd proj = ts.coeffs.transpose() * (ts.coeffs * v);
    CHECK((v - proj).norm() <= 1e-6 * v.norm());
  }
}

TEST_CASE("interface: jumps vanish through the matching order") {
  ConvConfig cfg = config_2d(10.0);
  cfg.conv_domain = interface_conv_domain(kBox2d, cfg.kernel);
  InterfaceOptions opts;
  opts.trefftz_domain = kBox2d;
  const int p_max = 2;
  const TrefftzSet ts = build_trefftz_interface_2d(cfg, 1.0, 4, 2, p_max, opts);
  REQUIRE(ts.size() > 0);
  for (Eigen::Index f = 0; f < ts.size(); ++f) {
    const Polynomial ul = trefftz_potential(ts, f, true);
    const Polynomial un = trefftz_potential(ts, f, false);
    for (int k = 0; k <= p_max; ++k) {
      const double du = poly_partial(un - ul, {0, k})({0, 0});
      const double dn = d_component_partial(cfg, un, 0, {0, 0}, {0, k}) + poly_partial(ul, {1, k})({0, 0});
      CHECK(std::abs(du) <= 1e-8 * ts.residual_scale);
      CHECK(std::abs(dn) <= 1e-8 * ts.residual_scale);
    }
    // one-sided samples: the potential jump along the interface is O(|y|^(p_max + 1))
    double worst = 0;
    for (double y : {0.1, 0.05, 0.025, -0.05}) {
      const double jump = (un - ul)({0, y});
      worst = std::max(worst, std::abs(jump) / std::pow(std::abs(y), p_max + 1));
    }
    double bound = 0;
    const Polynomial j = un - ul;
    for (int k = p_max + 1; k <= 4; ++k) bound += std::abs(poly_partial(j, {0, k})({0, 0})) / std::tgamma(k + 1);
    CHECK(worst <= bound + 1e-8);
    // the nonlocal divergence constraints still hold at x0
    for (const auto g : graded_multi_indices(2, 2))
      CHECK(std::abs(div_d_derivative(cfg, un, ts.x0, g)) <= 1e-8 * ts.residual_scale);
  }
}

TEST_CASE("interface: sides are evaluated by half plane") {
  ConvConfig cfg = config_2d(10.0);
  cfg.conv_domain = interface_conv_domain(kBox2d, cfg.kernel);
  InterfaceOptions opts;
  opts.trefftz_domain = kBox2d;
  const TrefftzSet ts = build_trefftz_interface_2d(cfg, 1.0, 4, 2, 2, opts);
  const Eigen::Index f = ts.size() - 1;
  const auto u = evaluate_trefftz(ts, f, FieldKind::U, {{-0.2, 0.1}, {0.2, 0.1}});
  CHECK(u(0, 0) == doctest::Approx(trefftz_potential(ts, f, true)({-0.2, 0.1})));
  CHECK(u(1, 0) == doctest::Approx(trefftz_potential(ts, f, false)({0.2, 0.1})));
  const auto d = evaluate_trefftz(ts, f, FieldKind::D, {{-0.2, 0.1}});
  CHECK(d(0, 0) == doctest::Approx(-poly_partial(trefftz_potential(ts, f, true), {1, 0})({-0.2, 0.1})));
}

TEST_CASE("evaluated E is minus the gradient of evaluated u") {
  const TrefftzSet ts = build_trefftz_bulk(config_2d(), 4, {0, 0}, 2, kBox2d);
  const Point p{0.21, -0.13};
  for (Eigen::Index f = 0; f < ts.size(); ++f) {
    const auto e = evaluate_trefftz(ts, f, FieldKind::E, {p});
    const auto ux = [&](double s) { return evaluate_trefftz(ts, f, FieldKind::U, {{s, p.y}})(0, 0); };
    const auto uy = [&](double t) { return evaluate_trefftz(ts, f, FieldKind::U, {{p.x, t}})(0, 0); };
    CHECK(std::abs(e(0, 0) + oracle::derivative(ux, p.x)) <= 1e-6);
    CHECK(std::abs(e(0, 1) + oracle::derivative(uy, p.y)) <= 1e-6);
  }
}
