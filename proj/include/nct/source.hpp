#pragma once

#include <vector>

#include "nct/grid.hpp"
#include "nct/vec3.hpp"

namespace nct {

/// Isotropic emission: uniform density Q0 over the box, a point at x0, or a
/// normal density about `center` (standard deviation `width`) truncated to
/// the box. `strength` is Q0 for the uniform kind and the total rate inside
/// the box otherwise.
struct SourceSpec {
  enum class Kind { uniform, point, gaussian };
  Kind kind = Kind::uniform;
  double strength = 1.0;
  Vec3 center{};
  double width = 1.0;

  double total_rate(const Box& box) const {
    return kind == Kind::uniform ? strength * box.volume() : strength;
  }
};

/// Cell-averaged source density on the grid. A point source fills the cell
/// that holds it; a gaussian is integrated exactly over each cell.
std::vector<double> source_density_field(const SourceSpec& src, const Box& box, const SpatialGrid& grid);

}  // namespace nct
