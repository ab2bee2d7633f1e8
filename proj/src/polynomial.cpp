#include "nltrefftz/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nltrefftz {

namespace {

void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("polynomial dimension must be 1 or 2");
}

// binom[n][k] for small n.
double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<double> powers(double t, int n) {
  std::vector<double> p(static_cast<std::size_t>(n) + 1, 1.0);
  for (int i = 1; i <= n; ++i) p[i] = p[i - 1] * t;
  return p;
}

// n! / (n-k)!
double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

}  // namespace

Polynomial::Polynomial(int dim, int degree, Point center)
    : dim_(dim), degree_(degree), center_(center) {
  check_dim(dim);
  if (degree < 0) throw std::invalid_argument("polynomial degree must be >= 0");
  if (dim == 1) center_.y = 0.0;
  coeffs_.assign(graded_count(dim, degree), 0.0);
}

Polynomial Polynomial::constant(int dim, double value, Point center) {
  Polynomial p(dim, 0, center);
  p.coeffs_[0] = value;
  return p;
}

Polynomial Polynomial::monomial(int dim, MultiIndex power, Point center) {
  if (power.x < 0 || power.y < 0 || (dim == 1 && power.y != 0))
    throw std::invalid_argument("invalid monomial exponent");
  Polynomial p(dim, power.order(), center);
  p.set_coeff(power, 1.0);
  return p;
}

double Polynomial::coeff(MultiIndex a) const {
  if (a.x < 0 || a.y < 0 || a.order() > degree_ || (dim_ == 1 && a.y != 0)) return 0.0;
  return coeffs_[graded_index(a, dim_)];
}

void Polynomial::set_coeff(MultiIndex a, double value) {
  if (a.x < 0 || a.y < 0 || (dim_ == 1 && a.y != 0))
    throw std::invalid_argument("invalid multi-index for polynomial");
  if (a.order() > degree_) *this = widened(a.order());
  coeffs_[graded_index(a, dim_)] = value;
}

void Polynomial::add_to_coeff(MultiIndex a, double value) { set_coeff(a, coeff(a) + value); }

int Polynomial::effective_degree() const {
  const auto idx = graded_multi_indices(dim_, degree_);
  int deg = -1;
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (coeffs_[i] != 0.0) deg = std::max(deg, idx[i].order());
  return deg;
}

double Polynomial::operator()(Point p) const {
  const double dx = p.x - center_.x;
  if (dim_ == 1) {
    double acc = 0.0;
    for (int i = degree_; i >= 0; --i) acc = acc * dx + coeffs_[i];
    return acc;
  }
  // Horner in y for each x-power column, then Horner in x.
  const double dy = p.y - center_.y;
  double acc = 0.0;
  for (int i = degree_; i >= 0; --i) {
    double col = 0.0;
    for (int j = degree_ - i; j >= 0; --j) col = col * dy + coeffs_[graded_index({i, j}, 2)];
    acc = acc * dx + col;
  }
  return acc;
}

Polynomial Polynomial::recentered(Point center) const {
  Polynomial out(dim_, degree_, center);
  const Point shift = out.center_ - center_;  // (x - c_old) = (x - c_new) + shift
  const auto px = powers(shift.x, degree_);
  const auto py = powers(shift.y, degree_);
  for (const auto a : graded_multi_indices(dim_, degree_)) {
    const double c = coeff(a);
    if (c == 0.0) continue;
    for (int i = 0; i <= a.x; ++i)
      for (int j = 0; j <= a.y; ++j)
        out.coeffs_[graded_index({i, j}, dim_)] +=
            c * binomial(a.x, i) * px[a.x - i] * binomial(a.y, j) * py[a.y - j];
  }
  return out;
}

Polynomial Polynomial::widened(int degree) const {
  if (degree <= degree_) return *this;
  Polynomial out(dim_, degree, center_);
  for (const auto a : graded_multi_indices(dim_, degree_))
    out.coeffs_[graded_index(a, dim_)] = coeff(a);
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("polynomial dimension mismatch");
  const Polynomial rhs = other.center_ == center_ ? other : other.recentered(center_);
  if (rhs.degree_ > degree_) *this = widened(rhs.degree_);
  for (const auto a : graded_multi_indices(dim_, rhs.degree_))
    coeffs_[graded_index(a, dim_)] += rhs.coeff(a);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this += (-1.0) * other; }

Polynomial& Polynomial::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("polynomial dimension mismatch");
  const Polynomial bb = b.center() == a.center() ? b : b.recentered(a.center());
  Polynomial out(a.dim(), a.degree() + bb.degree(), a.center());
  for (const auto ia : graded_multi_indices(a.dim(), a.degree())) {
    const double ca = a.coeff(ia);
    if (ca == 0.0) continue;
    for (const auto ib : graded_multi_indices(a.dim(), bb.degree()))
      out.add_to_coeff(ia + ib, ca * bb.coeff(ib));
  }
  return out;
}

std::vector<Polynomial> monomial_basis(int dim, int n_max, Point center) {
  check_dim(dim);
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  std::vector<Polynomial> out;
  for (const auto a : graded_multi_indices(dim, n_max)) out.push_back(Polynomial::monomial(dim, a, center));
  return out;
}

std::vector<Polynomial> harmonic_basis_2d(int n_max, Point center) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  std::vector<Polynomial> out;
  out.push_back(Polynomial::constant(2, 1.0, center));
  for (int k = 1; k <= n_max; ++k) {
    // (dx + i dy)^k = sum_j C(k,j) dx^(k-j) i^j dy^j
    Polynomial re(2, k, center);
    Polynomial im(2, k, center);
    for (int j = 0; j <= k; ++j) {
      const double c = binomial(k, j);
      const MultiIndex a{k - j, j};
      switch (j % 4) {
        case 0: re.set_coeff(a, c); break;
        case 1: im.set_coeff(a, c); break;
        case 2: re.set_coeff(a, -c); break;
        case 3: im.set_coeff(a, -c); break;
      }
    }
    out.push_back(std::move(re));
    out.push_back(std::move(im));
  }
  return out;
}

double poly_eval(const Polynomial& p, Point at) { return p(at); }

Polynomial poly_partial(const Polynomial& p, MultiIndex beta) {
  if (beta.x < 0 || beta.y < 0) throw std::invalid_argument("negative derivative order");
  if (p.dim() == 1 && beta.y > 0) return Polynomial(1, 0, p.center());
  const int deg = std::max(p.degree() - beta.order(), 0);
  Polynomial out(p.dim(), deg, p.center());
  if (beta.order() > p.degree()) return out;
  for (const auto a : graded_multi_indices(p.dim(), p.degree())) {
    if (a.x < beta.x || a.y < beta.y) continue;
    const double c = p.coeff(a);
    if (c == 0.0) continue;
    out.set_coeff({a.x - beta.x, a.y - beta.y}, c * falling(a.x, beta.x) * falling(a.y, beta.y));
  }
  return out;
}

std::vector<Polynomial> poly_gradient(const Polynomial& p) {
  std::vector<Polynomial> g;
  for (int axis = 0; axis < p.dim(); ++axis) g.push_back(poly_partial(p, unit_index(axis)));
  return g;
}

Polynomial laplacian(const Polynomial& p) {
  Polynomial out = poly_partial(p, {2, 0});
  if (p.dim() == 2) out += poly_partial(p, {0, 2});
  return out;
}

double integrate_1d(const Polynomial& p, double a, double b) {
  if (p.dim() != 1) throw std::invalid_argument("integrate_1d needs a 1D polynomial");
  const double ta = a - p.center().x;
  const double tb = b - p.center().x;
  double acc = 0.0;
  for (int i = p.degree(); i >= 0; --i) {
    const double c = p.coeff({i, 0}) / (i + 1);
    acc += c * (std::pow(tb, i + 1) - std::pow(ta, i + 1));
  }
  return acc;
}

}  // namespace nltrefftz
