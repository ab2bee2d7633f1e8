#include "nltrefftz/trefftz.hpp"

#include <cmath>
#include <stdexcept>

#include "nltrefftz/errors.hpp"

namespace nltrefftz {

namespace {

constexpr double kPaddingTol = 1.5229979744712628e-08;  // exp(-18)

std::vector<std::string> monomial_labels(int dim, int n_max, const std::string& prefix) {
  std::vector<std::string> out;
  for (const auto a : graded_multi_indices(dim, n_max)) {
    std::string s = prefix + "x^" + std::to_string(a.x);
    if (dim == 2) s += " y^" + std::to_string(a.y);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> harmonic_labels(int n_max) {
  std::vector<std::string> out{"local:1"};
  for (int k = 1; k <= n_max; ++k) {
    out.push_back("local:Re z^" + std::to_string(k));
    out.push_back("local:Im z^" + std::to_string(k));
  }
  return out;
}

// Row scaling and dropping of numerically empty rows.
ConstraintSystem finalize(Eigen::MatrixXd raw, std::vector<ConstraintRow> rows, std::vector<std::string> cols) {
  if (!raw.allFinite()) throw NumericalFailure("constraint matrix has non-finite entries");
  ConstraintSystem sys;
  const double global = raw.size() > 0 ? raw.cwiseAbs().maxCoeff() : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    const double rmax = raw.row(i).cwiseAbs().maxCoeff();
    const bool kept = global > 0.0 && rmax > kRowDropTol * global;
    sys.kept.push_back(kept);
    sys.row_scales.push_back(kept ? 1.0 / rmax : 0.0);
    if (kept) keep.push_back(i);
  }
  sys.matrix.resize(static_cast<Eigen::Index>(keep.size()), raw.cols());
  for (std::size_t r = 0; r < keep.size(); ++r)
    sys.matrix.row(static_cast<Eigen::Index>(r)) = raw.row(keep[r]) * sys.row_scales[keep[r]];
  sys.raw = std::move(raw);
  sys.rows = std::move(rows);
  sys.col_labels = std::move(cols);
  return sys;
}

void solve_into(TrefftzSet& ts, const ConstraintSystem& sys, const Eigen::VectorXd& constant) {
  const Eigen::MatrixXd null = null_space(sys.matrix, ts.null_tol);
  if (null.cols() == 0)
    throw NumericalFailure("no Trefftz functions at n_max=" + std::to_string(ts.n_max) + ", m=" + std::to_string(ts.m));
  std::vector<Eigen::VectorXd> seeds;
  if (constant.size() > 0) seeds.push_back(constant);
  ts.coeffs = canonical_basis(null, seeds).transpose();

  const Eigen::MatrixXd applied = sys.raw * ts.coeffs.transpose();
  ts.residuals.assign(static_cast<std::size_t>(ts.coeffs.rows()), 0.0);
  for (Eigen::Index f = 0; f < ts.coeffs.rows(); ++f)
    ts.residuals[f] = applied.rows() > 0 ? applied.col(f).cwiseAbs().maxCoeff() : 0.0;
  ts.residual_scale = sys.raw.size() > 0 ? sys.raw.cwiseAbs().maxCoeff() : 0.0;
  ts.constraint_labels.clear();
  ts.dropped_constraints.clear();
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    ts.constraint_labels.push_back(sys.rows[i].label());
    if (!sys.kept[i]) ts.dropped_constraints.push_back(sys.rows[i].label());
  }
}

Polynomial combine(const std::vector<Polynomial>& basis, const Eigen::RowVectorXd& c, std::size_t begin,
                   std::size_t end) {
  Polynomial u(basis[begin].dim(), 0, basis[begin].center());
  for (std::size_t a = begin; a < end; ++a) {
    if (c(static_cast<Eigen::Index>(a)) == 0.0) continue;
    u += c(static_cast<Eigen::Index>(a)) * basis[a];
  }
  return u;
}

}  // namespace

std::string to_string(ConstraintIndexing mode) {
  return mode == ConstraintIndexing::UpToM ? "up-to-m" : "paper-literal";
}

ConstraintIndexing constraint_indexing_from_string(const std::string& name) {
  if (name == "up-to-m") return ConstraintIndexing::UpToM;
  if (name == "paper-literal") return ConstraintIndexing::PaperLiteral;
  throw ConfigError("unknown constraint indexing '" + name + "'");
}

std::vector<MultiIndex> constraint_orders(int dim, int m, ConstraintIndexing indexing) {
  const int top = indexing == ConstraintIndexing::UpToM ? m : m - 1;
  return graded_multi_indices(dim, top);
}

std::string ConstraintRow::label() const {
  switch (kind) {
    case Kind::Divergence: return "div:" + std::to_string(order.x) + "," + std::to_string(order.y);
    case Kind::PotentialJump: return "jump_u:dy" + std::to_string(order.y);
    case Kind::FluxJump: return "jump_Dn:dy" + std::to_string(order.y);
  }
  return {};
}

ConstraintSystem build_constraints(const ConvConfig& cfg, const std::vector<Polynomial>& basis, Point x0, int m,
                                   ConstraintIndexing indexing) {
  if (basis.empty()) throw std::invalid_argument("build_constraints: empty basis");
  const int dim = basis.front().dim();
  const auto orders = constraint_orders(dim, m, indexing);
  Eigen::MatrixXd raw(static_cast<Eigen::Index>(orders.size()), static_cast<Eigen::Index>(basis.size()));
  std::vector<ConstraintRow> rows;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    rows.push_back({ConstraintRow::Kind::Divergence, orders[i]});
    for (std::size_t a = 0; a < basis.size(); ++a)
      raw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = div_d_derivative(cfg, basis[a], x0, orders[i]);
  }
  std::vector<std::string> cols;
  for (std::size_t a = 0; a < basis.size(); ++a) cols.push_back("basis" + std::to_string(a));
  return finalize(std::move(raw), std::move(rows), std::move(cols));
}

ConvDomain padded_domain(const Box& trefftz_domain, const Kernel& k) {
  const Box b = trefftz_domain.dilated(truncation_radius(k, kPaddingTol), k.dim);
  return k.dim == 1 ? interval_domain(b.lo.x, b.hi.x) : box_domain(b);
}

ConvDomain interface_conv_domain(const Box& trefftz_domain, const Kernel& k) {
  Box b = trefftz_domain.dilated(truncation_radius(k, kPaddingTol), 2);
  b.lo.x = std::max(b.lo.x, 0.0);
  return box_domain(b);
}

TrefftzSet build_trefftz_bulk(const ConvConfig& cfg, int n_max, Point x0, int m, const Box& trefftz_domain,
                              const BulkOptions& options) {
  validate(cfg);
  const int dim = cfg.kernel.dim;
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  if (!trefftz_domain.contains(x0, dim)) throw std::invalid_argument("x0 must lie in the Trefftz domain");
  if (cfg.eps_nl > 0.0) {
    bool covered = false;
    for (const Box& b : cfg.conv_domain.boxes)
      covered = covered || (b.contains(trefftz_domain.lo, dim) && b.contains(trefftz_domain.hi, dim));
    if (!covered) throw std::invalid_argument("convolution domain must contain the Trefftz domain");
  }
  if (dim == 1) x0.y = 0.0;

  TrefftzSet ts;
  ts.dim = dim;
  ts.basis_kind = BasisKind::Monomial;
  ts.n_max = n_max;
  ts.basis_center = x0;
  ts.cfg = cfg;
  ts.x0 = x0;
  ts.m = m;
  ts.indexing = options.indexing;
  ts.trefftz_domain = trefftz_domain;
  ts.null_tol = options.null_tol;

  const auto basis = monomial_basis(dim, n_max, x0);
  const ConstraintSystem sys = build_constraints(cfg, basis, x0, m, options.indexing);
  Eigen::VectorXd constant = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  constant(0) = 1.0;
  solve_into(ts, sys, constant);
  return ts;
}

TrefftzSet build_trefftz_interface_2d(const ConvConfig& cfg_nl, double eps_loc_local, int n_max, int m, int p_max,
                                      const InterfaceOptions& options) {
  validate(cfg_nl);
  if (cfg_nl.kernel.dim != 2) throw std::invalid_argument("interface construction is 2D");
  if (!(eps_loc_local > 0.0)) throw std::invalid_argument("local permittivity must be > 0");
  if (n_max < 0 || p_max < 0) throw std::invalid_argument("n_max and p_max must be >= 0");
  const double sigma = cfg_nl.kernel.length_scale();
  const Point origin{0.0, 0.0};

  TrefftzSet ts;
  ts.dim = 2;
  ts.basis_kind = BasisKind::Glued;
  ts.n_max = n_max;
  ts.basis_center = origin;
  ts.cfg = cfg_nl;
  ts.eps_loc_local = eps_loc_local;
  ts.x0 = std::isnan(options.x0.x) ? Point{sigma / 2.0, 0.0} : options.x0;
  ts.m = m;
  ts.p_max = p_max;
  ts.indexing = options.indexing;
  ts.trefftz_domain = options.trefftz_domain.measure(2) > 0.0 ? options.trefftz_domain
                                                               : Box{{-sigma, -sigma}, {sigma, sigma}};
  ts.null_tol = options.null_tol;
  if (!(ts.x0.x > 0.0)) throw std::invalid_argument("interface divergence point must lie in x > 0");

  const auto local = harmonic_basis_2d(n_max, origin);
  const auto remote = monomial_basis(2, n_max, origin);
  const auto n_local = static_cast<Eigen::Index>(local.size());
  const auto n_cols = n_local + static_cast<Eigen::Index>(remote.size());

  const auto orders = constraint_orders(2, m, options.indexing);
  std::vector<ConstraintRow> rows;
  for (const auto g : orders) rows.push_back({ConstraintRow::Kind::Divergence, g});
  for (int k = 0; k <= p_max; ++k) rows.push_back({ConstraintRow::Kind::PotentialJump, {0, k}});
  for (int k = 0; k <= p_max; ++k) rows.push_back({ConstraintRow::Kind::FluxJump, {0, k}});

  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), n_cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const ConstraintRow& row = rows[i];
    const int k = row.order.y;
    switch (row.kind) {
      case ConstraintRow::Kind::Divergence:
        for (std::size_t a = 0; a < remote.size(); ++a)
          raw(r, n_local + static_cast<Eigen::Index>(a)) = div_d_derivative(cfg_nl, remote[a], ts.x0, row.order);
        break;
      case ConstraintRow::Kind::PotentialJump:
        // [u] = u_nl - u_loc
        for (std::size_t a = 0; a < local.size(); ++a)
          raw(r, static_cast<Eigen::Index>(a)) = -poly_partial(local[a], {0, k})(origin);
        for (std::size_t a = 0; a < remote.size(); ++a)
          raw(r, n_local + static_cast<Eigen::Index>(a)) = poly_partial(remote[a], {0, k})(origin);
        break;
      case ConstraintRow::Kind::FluxJump:
        // [D_x] = D_x^nl(0+) - eps_loc_local * (-d_x u_loc)(0-)
        for (std::size_t a = 0; a < local.size(); ++a)
          raw(r, static_cast<Eigen::Index>(a)) = eps_loc_local * poly_partial(local[a], {1, k})(origin);
        for (std::size_t a = 0; a < remote.size(); ++a)
          raw(r, n_local + static_cast<Eigen::Index>(a)) = d_component_partial(cfg_nl, remote[a], 0, origin, {0, k});
        break;
    }
  }
  auto cols = harmonic_labels(n_max);
  for (auto& s : monomial_labels(2, n_max, "nonlocal:")) cols.push_back(std::move(s));
  const ConstraintSystem sys = finalize(std::move(raw), std::move(rows), std::move(cols));

  Eigen::VectorXd constant = Eigen::VectorXd::Zero(n_cols);
  constant(0) = 1.0;
  constant(n_local) = 1.0;
  solve_into(ts, sys, constant.normalized());
  return ts;
}

std::vector<Polynomial> basis_functions(const TrefftzSet& ts) {
  if (ts.basis_kind == BasisKind::Monomial) return monomial_basis(ts.dim, ts.n_max, ts.basis_center);
  auto out = harmonic_basis_2d(ts.n_max, ts.basis_center);
  for (auto& p : monomial_basis(2, ts.n_max, ts.basis_center)) out.push_back(std::move(p));
  return out;
}

std::size_t local_block_size(const TrefftzSet& ts) {
  return ts.basis_kind == BasisKind::Glued ? static_cast<std::size_t>(2 * ts.n_max + 1) : 0;
}

Polynomial trefftz_potential(const TrefftzSet& ts, Eigen::Index which, bool local) {
  if (which < 0 || which >= ts.size()) throw std::out_of_range("Trefftz function index out of range");
  const auto basis = basis_functions(ts);
  const auto split = local_block_size(ts);
  const Eigen::RowVectorXd c = ts.coeffs.row(which);
  if (ts.basis_kind == BasisKind::Monomial) return combine(basis, c, 0, basis.size());
  return local ? combine(basis, c, 0, split) : combine(basis, c, split, basis.size());
}

Eigen::MatrixXd evaluate_trefftz(const TrefftzSet& ts, Eigen::Index which, FieldKind what,
                                 const std::vector<Point>& points) {
  const Polynomial u_nl = trefftz_potential(ts, which, false);
  const bool glued = ts.basis_kind == BasisKind::Glued;
  const Polynomial u_loc = glued ? trefftz_potential(ts, which, true) : u_nl;
  const Eigen::Index cols = (what == FieldKind::E || what == FieldKind::D) ? ts.dim : 1;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(points.size()), cols);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const Point p = points[i];
    const bool local = glued && p.x < 0.0;
    const Polynomial& u = local ? u_loc : u_nl;
    switch (what) {
      case FieldKind::U: out(r, 0) = u(p); break;
      case FieldKind::E:
        for (int c = 0; c < ts.dim; ++c) out(r, c) = -poly_partial(u, unit_index(c))(p);
        break;
      case FieldKind::D:
        if (local) {
          for (int c = 0; c < ts.dim; ++c) out(r, c) = -ts.eps_loc_local * poly_partial(u, unit_index(c))(p);
        } else {
          const Vector2 d = d_field(ts.cfg, u, p);
          for (int c = 0; c < ts.dim; ++c) out(r, c) = d[c];
        }
        break;
      case FieldKind::DivD:
        out(r, 0) = local ? -ts.eps_loc_local * laplacian(u)(p) : div_d_derivative(ts.cfg, u, p, {});
        break;
    }
  }
  return out;
}

Eigen::MatrixXd canonical_basis(const Eigen::MatrixXd& n, const std::vector<Eigen::VectorXd>& seeds) {
  const Eigen::Index dim = n.rows();
  const Eigen::Index k = n.cols();
  Eigen::MatrixXd q(dim, k);
  if (k == 0) return q;
  const Eigen::MatrixXd proj = n * n.transpose();
  const double accept = 0.5 / std::sqrt(static_cast<double>(dim));
  Eigen::Index found = 0;
  auto consider = [&](const Eigen::VectorXd& s) {
    if (found == k) return;
    Eigen::VectorXd v = proj * s;
    for (int pass = 0; pass < 2; ++pass)
      if (found > 0) v -= q.leftCols(found) * (q.leftCols(found).transpose() * v);
    const double norm = v.norm();
    if (norm > accept * s.norm()) q.col(found++) = v / norm;
  };
  for (const auto& s : seeds) {
    // seeds are only taken when they lie (numerically) in the span
    if ((proj * s - s).norm() <= 1e-8 * s.norm()) consider(s);
  }
  for (Eigen::Index j = 0; j < dim && found < k; ++j) consider(Eigen::VectorXd::Unit(dim, j));
  if (found < k) throw NumericalFailure("canonical_basis: failed to span the null space");
  return q;
}

}  // namespace nltrefftz
