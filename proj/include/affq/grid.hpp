// Rectangular sample grids over chart boxes, with margins trimmed so
// finite-difference stencils never leave the declared domain.

#pragma once

#include "affq/numerics.hpp"

namespace affq {

struct GridSpec {
  Vec lo;
  Vec hi;
  int points_per_axis = 21;
  double margin = 0.0;  // shrink each axis by this amount on both ends

  static GridSpec box(int n, double half_width, int points, double margin = 0.0) {
    GridSpec g;
    g.lo = Vec::Constant(n, -half_width);
    g.hi = Vec::Constant(n, half_width);
    g.points_per_axis = points;
    g.margin = margin;
    return g;
  }
  int dim() const { return static_cast<int>(lo.size()); }
};

inline std::vector<Vec> grid_points(const GridSpec& g) {
  const int n = g.dim();
  const int k = g.points_per_axis;
  std::vector<Vec> pts;
  std::vector<int> idx(n, 0);
  const long total = static_cast<long>(std::pow(static_cast<double>(k), n));
  pts.reserve(total);
  for (long t = 0; t < total; ++t) {
    Vec p(n);
    for (int a = 0; a < n; ++a) {
      const double lo = g.lo(a) + g.margin;
      const double hi = g.hi(a) - g.margin;
      p(a) = (k == 1) ? 0.5 * (lo + hi)
                      : lo + (hi - lo) * static_cast<double>(idx[a]) / (k - 1);
    }
    pts.push_back(std::move(p));
    for (int a = 0; a < n; ++a) {
      if (++idx[a] < k) break;
      idx[a] = 0;
    }
  }
  return pts;
}

}  // namespace affq
