#include "nct/grid.hpp"

#include <algorithm>
#include <cmath>

#include "nct/errors.hpp"

namespace nct {

double Box::volume() const {
  const Vec3 e = extent();
  return e.x * e.y * e.z;
}

bool Box::contains(const Vec3& p) const {
  return p.x >= lower.x && p.x <= upper.x && p.y >= lower.y && p.y <= upper.y &&
         p.z >= lower.z && p.z <= upper.z;
}

Vec3 Box::wrap(const Vec3& p) const {
  Vec3 out = p;
  for (int a = 0; a < 3; ++a) {
    const double len = upper[a] - lower[a];
    double r = std::fmod(p[a] - lower[a], len);
    if (r < 0.0) r += len;
    if (r >= len) r = 0.0;
    out[a] = lower[a] + r;
  }
  return out;
}

SpatialGrid::SpatialGrid(Box box, std::array<int, 3> cells) : box_(box), cells_(cells) {
  for (int a = 0; a < 3; ++a) {
    if (cells[a] < 1) throw DomainError("grid: cell counts must be >= 1");
    const double len = box.upper[a] - box.lower[a];
    if (!(len > 0.0)) throw DomainError("grid: box upper must exceed lower on every axis");
    h_[a] = len / cells[a];
  }
}

std::array<int, 3> SpatialGrid::unravel(std::size_t idx) const {
  const std::size_t nx = static_cast<std::size_t>(cells_[0]);
  const std::size_t ny = static_cast<std::size_t>(cells_[1]);
  return {static_cast<int>(idx % nx), static_cast<int>((idx / nx) % ny),
          static_cast<int>(idx / (nx * ny))};
}

Vec3 SpatialGrid::center(int i, int j, int k) const {
  return {box_.lower.x + (i + 0.5) * h_[0], box_.lower.y + (j + 0.5) * h_[1],
          box_.lower.z + (k + 0.5) * h_[2]};
}

Vec3 SpatialGrid::center(std::size_t idx) const {
  const auto c = unravel(idx);
  return center(c[0], c[1], c[2]);
}

std::array<int, 3> SpatialGrid::locate(const Vec3& p) const {
  std::array<int, 3> c{};
  for (int a = 0; a < 3; ++a) {
    const int v = static_cast<int>(std::floor((p[a] - box_.lower[a]) / h_[a]));
    c[a] = std::clamp(v, 0, cells_[a] - 1);
  }
  return c;
}

}  // namespace nct
