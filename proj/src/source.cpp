#include "nct/source.hpp"

#include <algorithm>
#include <cmath>

#include "nct/errors.hpp"

namespace nct {

namespace {
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
}  // namespace

std::vector<double> source_density_field(const SourceSpec& src, const Box& box, const SpatialGrid& grid) {
  std::vector<double> q(grid.size(), 0.0);
  switch (src.kind) {
    case SourceSpec::Kind::uniform:
      std::fill(q.begin(), q.end(), src.strength);
      break;
    case SourceSpec::Kind::point: {
      if (!box.contains(src.center)) throw DomainError("point source lies outside the domain");
      const auto c = grid.locate(src.center);
      q[grid.index(c[0], c[1], c[2])] = src.strength / grid.cell_volume();
      break;
    }
    case SourceSpec::Kind::gaussian: {
      // Truncated per axis: mass of cell [a, b] is Φ(b) − Φ(a) over the box mass.
      std::array<std::vector<double>, 3> mass;
      for (int a = 0; a < 3; ++a) {
        const double lo = normal_cdf((box.lower[a] - src.center[a]) / src.width);
        const double hi = normal_cdf((box.upper[a] - src.center[a]) / src.width);
        if (!(hi - lo > 0.0)) throw DomainError("gaussian source has no mass inside the domain");
        mass[a].resize(grid.n(a));
        for (int i = 0; i < grid.n(a); ++i) {
          const double x0 = grid.box().lower[a] + i * grid.h(a);
          const double x1 = x0 + grid.h(a);
          mass[a][i] = (normal_cdf((x1 - src.center[a]) / src.width) -
                        normal_cdf((x0 - src.center[a]) / src.width)) /
                       (hi - lo);
        }
      }
      const double scale = src.strength / grid.cell_volume();
      for (int k = 0; k < grid.n(2); ++k) {
        for (int j = 0; j < grid.n(1); ++j) {
          for (int i = 0; i < grid.n(0); ++i) {
            q[grid.index(i, j, k)] = scale * mass[0][i] * mass[1][j] * mass[2][k];
          }
        }
      }
      break;
    }
  }
  return q;
}

}  // namespace nct
