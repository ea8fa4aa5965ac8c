#pragma once

#include <array>
#include <cstddef>

#include "nct/vec3.hpp"

namespace nct {

struct Box {
  Vec3 lower{-1.0, -1.0, -1.0};
  Vec3 upper{1.0, 1.0, 1.0};

  Vec3 extent() const { return upper - lower; }
  Vec3 center() const { return (upper + lower) * 0.5; }
  double volume() const;
  bool contains(const Vec3& p) const;
  /// Maps p into the box by periodic images.
  Vec3 wrap(const Vec3& p) const;

  static Box centered(double half_width) {
    return Box{{-half_width, -half_width, -half_width}, {half_width, half_width, half_width}};
  }
};

/// Uniform Cartesian cells; x varies fastest in the flat index.
class SpatialGrid {
 public:
  SpatialGrid() = default;
  SpatialGrid(Box box, std::array<int, 3> cells);

  const Box& box() const { return box_; }
  int n(int axis) const { return cells_[axis]; }
  const std::array<int, 3>& cells() const { return cells_; }
  std::size_t size() const {
    return static_cast<std::size_t>(cells_[0]) * cells_[1] * cells_[2];
  }
  double h(int axis) const { return h_[axis]; }
  Vec3 spacing() const { return {h_[0], h_[1], h_[2]}; }
  double cell_volume() const { return h_[0] * h_[1] * h_[2]; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(cells_[0]) * (static_cast<std::size_t>(j) +
                                                  static_cast<std::size_t>(cells_[1]) * k);
  }
  std::array<int, 3> unravel(std::size_t idx) const;
  Vec3 center(int i, int j, int k) const;
  Vec3 center(std::size_t idx) const;
  /// Cell holding p, clamped to the grid.
  std::array<int, 3> locate(const Vec3& p) const;

 private:
  Box box_;
  std::array<int, 3> cells_{1, 1, 1};
  std::array<double, 3> h_{2.0, 2.0, 2.0};
};

}  // namespace nct
