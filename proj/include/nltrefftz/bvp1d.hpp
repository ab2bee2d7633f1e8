#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nltrefftz/kernels.hpp"

namespace nltrefftz {

/// Domain of the convolution integral in the two-point problem.
enum class ConvVariant { WholeDomain, NonlocalOnly };
/// Where the convolution term enters the constitutive law.
enum class ApplyConvIn { Everywhere, NonlocalRegionOnly };

std::string to_string(ConvVariant v);
std::string to_string(ApplyConvIn v);
ConvVariant conv_variant_from_string(const std::string& s);
ApplyConvIn apply_conv_in_from_string(const std::string& s);

/// Two-point problem on (a, b) with a local inclusion (c, d):
/// dD/dx = 0, E = -du/dx, u(a) = u_a, u(b) = u_b.
struct BvpConfig {
  double a = -5.0;
  double b = 5.0;
  double c = -1.0;
  double d = 1.0;
  Kernel kernel = make_gaussian(1.0, 1);
  double eps_loc = 1.0;
  double eps_nl = 10.0;
  ConvVariant variant = ConvVariant::WholeDomain;
  ApplyConvIn apply_conv_in = ApplyConvIn::Everywhere;
  int n_cells = 256;
  double u_a = 0.0;
  double u_b = 1.0;
};

/// The sigma = 1, eps_loc = 1, eps_nl = 10, (-5, 5) / (-1, 1) configuration.
BvpConfig paper_bvp_config(ConvVariant variant, ApplyConvIn apply = ApplyConvIn::Everywhere);

struct BvpSolution {
  std::vector<double> edges;      // n_cells + 1
  std::vector<double> midpoints;  // n_cells
  std::vector<double> e_field;    // per cell
  std::vector<double> potential;  // per edge
  double d_value = 0.0;
  /// max-norm residual of the collocation system
  double residual = 0.0;
  /// inclusion bounds as realized on the grid (always cell edges)
  double c_snapped = 0.0;
  double d_snapped = 0.0;
};

/// Piecewise-constant E collocated at cell midpoints plus the scalar D.
/// Throws NumericalFailure on a singular system.
BvpSolution solve_bvp_1d(const BvpConfig& cfg);

/// D(x) = eps_loc E(x) + [conv applies at x] eps_nl (kernel *_dom E)(x) from a solution.
double reconstruct_d(const BvpConfig& cfg, const BvpSolution& sol, double x);

struct RefinementResult {
  BvpSolution solution;
  /// (n_cells, D) per level, in increasing n_cells
  std::vector<std::pair<int, double>> history;
  bool converged = false;
};

/// Doubles n_cells until successive D differ by <= target_rel_change (relative).
RefinementResult refine_until(BvpConfig cfg, double target_rel_change, int max_cells);

}  // namespace nltrefftz
