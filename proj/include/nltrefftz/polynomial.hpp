#pragma once

#include <span>
#include <vector>

#include "nltrefftz/geometry.hpp"

namespace nltrefftz {

/// Dense polynomial in one or two variables, stored in powers of the
/// shifted coordinates (x - cx)^i (y - cy)^j. Coefficients follow the
/// graded-lexicographic ordering of graded_multi_indices(dim, degree).
class Polynomial {
 public:
  Polynomial() = default;
  /// Zero polynomial with room for total degree `degree`.
  Polynomial(int dim, int degree, Point center = {});

  static Polynomial constant(int dim, double value, Point center = {});
  static Polynomial monomial(int dim, MultiIndex power, Point center = {});

  int dim() const { return dim_; }
  /// Capacity degree (largest representable total degree).
  int degree() const { return degree_; }
  Point center() const { return center_; }

  std::span<const double> coeffs() const { return coeffs_; }
  double coeff(MultiIndex a) const;
  void set_coeff(MultiIndex a, double value);
  void add_to_coeff(MultiIndex a, double value);

  /// Largest total degree with a nonzero coefficient; -1 for the zero polynomial.
  int effective_degree() const;
  bool is_zero() const { return effective_degree() < 0; }

  double operator()(Point p) const;

  /// The same polynomial expanded about `center`.
  Polynomial recentered(Point center) const;
  /// Copy with capacity raised to `degree` (never truncates).
  Polynomial widened(int degree) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(double s, Polynomial p) { return p *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  int dim_ = 1;
  int degree_ = 0;
  Point center_{};
  std::vector<double> coeffs_ = {0.0};
};

/// All shifted monomials of total degree <= n_max, graded-lex order.
std::vector<Polynomial> monomial_basis(int dim, int n_max, Point center = {});

/// {1} followed by Re (z - z0)^k, Im (z - z0)^k for k = 1..n_max.
std::vector<Polynomial> harmonic_basis_2d(int n_max, Point center = {});

double poly_eval(const Polynomial& p, Point at);
Polynomial poly_partial(const Polynomial& p, MultiIndex beta);
/// Componentwise first derivatives; length p.dim().
std::vector<Polynomial> poly_gradient(const Polynomial& p);
Polynomial laplacian(const Polynomial& p);

/// Exact integral over [a, b] of a 1D polynomial.
double integrate_1d(const Polynomial& p, double a, double b);

}  // namespace nltrefftz
