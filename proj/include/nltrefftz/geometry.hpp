#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nltrefftz {

/// A point in 1D or 2D. One-dimensional code ignores `y`.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
};

/// Field components (E, D). Only the first `dim` entries are meaningful.
using Vector2 = std::array<double, 2>;

/// Exponents of a partial derivative or monomial: d^x/dx^x d^y/dy^y.
struct MultiIndex {
  int x = 0;
  int y = 0;

  int order() const { return x + y; }
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend MultiIndex operator+(MultiIndex a, MultiIndex b) { return {a.x + b.x, a.y + b.y}; }
};

/// Unit multi-index along axis `axis` (0 = x, 1 = y).
inline MultiIndex unit_index(int axis) { return axis == 0 ? MultiIndex{1, 0} : MultiIndex{0, 1}; }

/// Axis-aligned interval (1D) or rectangle (2D).
struct Box {
  Point lo;
  Point hi;

  double width(int axis) const { return axis == 0 ? hi.x - lo.x : hi.y - lo.y; }
  double measure(int dim) const { return dim == 1 ? width(0) : width(0) * width(1); }
  bool contains(Point p, int dim) const {
    bool in = p.x >= lo.x && p.x <= hi.x;
    if (dim == 2) in = in && p.y >= lo.y && p.y <= hi.y;
    return in;
  }
  Box dilated(double r, int dim) const {
    Box b = *this;
    b.lo.x -= r;
    b.hi.x += r;
    if (dim == 2) {
      b.lo.y -= r;
      b.hi.y += r;
    }
    return b;
  }
  Box shifted(Point v) const { return {lo + v, hi + v}; }
  friend bool operator==(const Box&, const Box&) = default;
};

/// Multi-indices of total order <= n in graded-lexicographic order:
/// degree by degree, and within a degree from x^d down to y^d.
std::vector<MultiIndex> graded_multi_indices(int dim, int n);

/// Position of `a` in graded_multi_indices(dim, n) (independent of n).
std::size_t graded_index(MultiIndex a, int dim);

/// Number of multi-indices with total order <= n.
std::size_t graded_count(int dim, int n);

}  // namespace nltrefftz
