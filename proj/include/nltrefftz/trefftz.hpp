#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nltrefftz/geometry.hpp"
#include "nltrefftz/nlconv.hpp"
#include "nltrefftz/numerics.hpp"
#include "nltrefftz/polynomial.hpp"

namespace nltrefftz {

/// Which derivative orders of div D are constrained at x0.
///  - UpToM:        d^gamma (div D)(x0) = 0 for all |gamma| <= m.
///  - PaperLiteral: d_x^beta D(x0) = 0 for beta = 1..m, i.e. |gamma| <= m - 1.
enum class ConstraintIndexing { UpToM, PaperLiteral };

std::string to_string(ConstraintIndexing mode);
ConstraintIndexing constraint_indexing_from_string(const std::string& name);

/// Orders gamma constrained for a given (m, indexing); empty when none.
std::vector<MultiIndex> constraint_orders(int dim, int m, ConstraintIndexing indexing);

struct ConstraintRow {
  enum class Kind { Divergence, PotentialJump, FluxJump };
  Kind kind = Kind::Divergence;
  /// Derivative order at the constraint point (jump rows use d_y^k: {0, k}).
  MultiIndex order;

  std::string label() const;
};

struct ConstraintSystem {
  /// Row-scaled matrix: each kept row has unit max-norm.
  Eigen::MatrixXd matrix;
  /// Unscaled rows, including dropped ones; same order as `rows`.
  Eigen::MatrixXd raw;
  std::vector<ConstraintRow> rows;
  /// Scale applied to raw row i (0 for dropped rows).
  std::vector<double> row_scales;
  std::vector<bool> kept;
  std::vector<std::string> col_labels;
};

/// Rows whose max-norm is <= kRowDropTol times the largest entry of the matrix are dropped.
inline constexpr double kRowDropTol = 1e-14;

/// Divergence constraints d^gamma (div D_alpha)(x0) for every basis function.
ConstraintSystem build_constraints(const ConvConfig& cfg, const std::vector<Polynomial>& basis, Point x0, int m,
                                   ConstraintIndexing indexing = ConstraintIndexing::UpToM);

enum class BasisKind { Monomial, Glued };

/// A pseudoharmonic function set: rows of `coeffs` are orthonormal
/// coefficient vectors over the basis described by the metadata.
struct TrefftzSet {
  int dim = 1;
  BasisKind basis_kind = BasisKind::Monomial;
  int n_max = 0;
  Point basis_center{};
  /// Nonlocal-side configuration (the whole space for bulk sets).
  ConvConfig cfg;
  /// Local-side permittivity for glued sets.
  double eps_loc_local = 1.0;
  Point x0{};
  int m = 0;
  /// Matching order for glued sets; -1 otherwise.
  int p_max = -1;
  ConstraintIndexing indexing = ConstraintIndexing::UpToM;
  Box trefftz_domain{};
  double null_tol = kDefaultNullTol;

  Eigen::MatrixXd coeffs;
  /// Max constraint residual per function (unscaled rows).
  std::vector<double> residuals;
  /// Largest unscaled constraint entry over the raw basis.
  double residual_scale = 0.0;
  std::vector<std::string> constraint_labels;
  std::vector<std::string> dropped_constraints;

  Eigen::Index size() const { return coeffs.rows(); }
  Eigen::Index basis_size() const { return coeffs.cols(); }
};

struct BulkOptions {
  ConstraintIndexing indexing = ConstraintIndexing::UpToM;
  double null_tol = kDefaultNullTol;
};

/// Default convolution domain for a bulk set: the Trefftz box dilated by the
/// kernel truncation radius at exp(-18).
ConvDomain padded_domain(const Box& trefftz_domain, const Kernel& k);

/// Pseudoharmonic functions over monomials of degree <= n_max centered at x0.
/// m < 0 imposes no constraints. Throws NumericalFailure on an empty set.
TrefftzSet build_trefftz_bulk(const ConvConfig& cfg, int n_max, Point x0, int m, const Box& trefftz_domain,
                              const BulkOptions& options = {});

struct InterfaceOptions {
  /// Divergence constraint point on the nonlocal side; NaN picks (sigma / 2, 0).
  Point x0{std::numeric_limits<double>::quiet_NaN(), 0.0};
  /// Box around the interface origin; zero-size picks (-sigma, sigma)^2.
  Box trefftz_domain{};
  ConstraintIndexing indexing = ConstraintIndexing::UpToM;
  double null_tol = kDefaultNullTol;
};

/// x > 0 half of the Trefftz box padded by the kernel truncation radius.
ConvDomain interface_conv_domain(const Box& trefftz_domain, const Kernel& k);

/// Local (x < 0, harmonic polynomials, D = eps_loc_local E) glued to nonlocal
/// (x > 0, monomials, cfg_nl) across x = 0 through jump conditions on u and
/// D.n of y-order 0..p_max at the origin.
TrefftzSet build_trefftz_interface_2d(const ConvConfig& cfg_nl, double eps_loc_local, int n_max, int m, int p_max,
                                      const InterfaceOptions& options = {});

/// Basis functions in coefficient order. Glued sets list local harmonics first.
std::vector<Polynomial> basis_functions(const TrefftzSet& ts);
/// Number of leading basis functions belonging to the local side (0 for bulk sets).
std::size_t local_block_size(const TrefftzSet& ts);

/// Potential of function `which` on side `local` (ignored for bulk sets).
Polynomial trefftz_potential(const TrefftzSet& ts, Eigen::Index which, bool local = false);

enum class FieldKind { U, E, D, DivD };

/// One row per point; columns: 1 for U/DivD, dim for E/D.
/// Glued sets evaluate the local side for x < 0.
Eigen::MatrixXd evaluate_trefftz(const TrefftzSet& ts, Eigen::Index which, FieldKind what,
                                 const std::vector<Point>& points);

/// Canonical orthonormal basis of span(columns of n): Gram-Schmidt of the
/// projector applied to `seeds` (optional) and then unit vectors, in order.
Eigen::MatrixXd canonical_basis(const Eigen::MatrixXd& n, const std::vector<Eigen::VectorXd>& seeds = {});

}  // namespace nltrefftz
