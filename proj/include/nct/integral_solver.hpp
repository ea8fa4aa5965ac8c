#pragma once

#include <array>
#include <functional>
#include <vector>

#include "nct/cross_section.hpp"
#include "nct/grid.hpp"
#include "nct/vec3.hpp"

namespace nct {

/// Point-to-point transfer along flight direction Ω over distance r: the
/// collision density q̂(Ω, r) and the survival F(Ω, r).
struct TransferLaw {
  std::function<double(const Direction&, double)> q;
  std::function<double(const Direction&, double)> survival;
};

TransferLaw transfer_law(const CrossSectionModel& model);

/// Translation-invariant transfer coefficients on a uniform grid. Entry at
/// offset o couples source cell (dest + o) into the destination cell:
///   collision: ∫_cell q̂(Ω, r)/(4πr²) dV′,  flux: ∫_cell F(Ω, r)/(4πr²) dV′,
/// with r = |x − x′| and Ω = (x − x′)/r.
class KernelTable {
 public:
  KernelTable() = default;
  KernelTable(std::array<int, 3> reach, double cutoff);

  const std::array<int, 3>& reach() const { return reach_; }
  double cutoff() const { return cutoff_; }
  std::size_t offset_index(int di, int dj, int dk) const;
  double collision(int di, int dj, int dk) const { return collision_[offset_index(di, dj, dk)]; }
  double flux(int di, int dj, int dk) const { return flux_[offset_index(di, dj, dk)]; }
  std::vector<double>& collision_data() { return collision_; }
  std::vector<double>& flux_data() { return flux_; }
  const std::vector<double>& collision_data() const { return collision_; }
  const std::vector<double>& flux_data() const { return flux_; }

  /// Σ of collision coefficients over source cells inside the grid.
  double collision_row_sum(const SpatialGrid& grid, std::size_t dest) const;
  /// Σ over the whole stencil (an unbounded medium cut at the stencil).
  double stencil_collision_sum() const;

 private:
  std::array<int, 3> reach_{0, 0, 0};
  double cutoff_ = 0.0;
  std::vector<double> collision_;
  std::vector<double> flux_;
};

/// Cutoff defaults to the model's s_max. The stencil never reaches past the
/// grid. KernelAccuracyError when the stencil is cut short by the cutoff
/// while more than 1e-3 of the collision probability lies beyond it.
KernelTable build_kernel(const SpatialGrid& grid, const CrossSectionModel& model, double cutoff = 0.0,
                         int threads = 1);
KernelTable build_kernel(const SpatialGrid& grid, const TransferLaw& law, double cutoff, int threads = 1);

/// out[i] = Σ_o coeff[o] * field[i + o] over cells inside the grid.
std::vector<double> apply_kernel(const SpatialGrid& grid, const KernelTable& kernel,
                                 const std::vector<double>& field, bool flux_part, int threads = 1);

struct PicardResult {
  std::vector<double> collision_density;  // F̂ per cell
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
};

/// F̂ ← K (c F̂ + Q), stopping when max|ΔF̂| / max|F̂| < tol.
/// NonConvergenceError after max_iter sweeps.
PicardResult picard_solve(const SpatialGrid& grid, const KernelTable& kernel, double c,
                          const std::vector<double>& source, double tol = 1e-10, int max_iter = 500,
                          int threads = 1);

/// φ_c from the survival kernel.
std::vector<double> scalar_flux(const SpatialGrid& grid, const KernelTable& kernel, double c,
                                const std::vector<double>& collision_density,
                                const std::vector<double>& source, int threads = 1);

/// ψ_c(x, Ω) by integrating the isotropic emission (c F̂ + Q)/4π backwards
/// along −Ω, cell by cell, to the box edge.
double angular_flux(const SpatialGrid& grid, const TransferLaw& law, double c,
                    const std::vector<double>& collision_density, const std::vector<double>& source,
                    const Vec3& x, const Direction& omega);

/// Source field sampled at cell centres.
std::vector<double> sample_field(const SpatialGrid& grid, const std::function<double(const Vec3&)>& f);

}  // namespace nct
