#include "nltrefftz/geometry.hpp"

#include <stdexcept>

namespace nltrefftz {

std::vector<MultiIndex> graded_multi_indices(int dim, int n) {
  std::vector<MultiIndex> out;
  if (n < 0) return out;
  if (dim == 1) {
    for (int i = 0; i <= n; ++i) out.push_back({i, 0});
    return out;
  }
  if (dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
  for (int d = 0; d <= n; ++d)
    for (int j = 0; j <= d; ++j) out.push_back({d - j, j});
  return out;
}

std::size_t graded_index(MultiIndex a, int dim) {
  if (dim == 1) return static_cast<std::size_t>(a.x);
  const auto d = static_cast<std::size_t>(a.order());
  return d * (d + 1) / 2 + static_cast<std::size_t>(a.y);
}

std::size_t graded_count(int dim, int n) {
  if (n < 0) return 0;
  const auto m = static_cast<std::size_t>(n);
  return dim == 1 ? m + 1 : (m + 1) * (m + 2) / 2;
}

}  // namespace nltrefftz
