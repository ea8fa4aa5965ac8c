#include "nct/integral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nct/errors.hpp"
#include "nct/parallel.hpp"
#include "nct/quadrature_1d.hpp"

namespace nct {

namespace {

constexpr double kInvFourPi = 0.25 / std::numbers::pi;

int points_for_distance(int cheb) {
  if (cheb <= 1) return 10;
  if (cheb == 2) return 6;
  if (cheb <= 4) return 4;
  return 2;
}

/// Exact-geometry self-cell coefficients: rays from the cell centre to each
/// face point p subtend dΩ = (h/2)/|p|³ dA, and the radial integrals are
/// ∫₀^|p| q̂ dr = 1 − F(|p|) and ∫₀^|p| F dr.
void self_cell(const SpatialGrid& grid, const TransferLaw& law, double& coll, double& flux) {
  const auto& gl = gauss_legendre_cached(16);
  coll = 0.0;
  flux = 0.0;
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    const double ha = 0.5 * grid.h(a);
    const double hb = 0.5 * grid.h(b);
    const double hc = 0.5 * grid.h(c);
    for (int sign = -1; sign <= 1; sign += 2) {
      for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) {
          Vec3 p;
          p[a] = sign * ha;
          p[b] = hb * gl.nodes[i];
          p[c] = hc * gl.nodes[j];
          const double r = norm(p);
          const double d_omega = gl.weights[i] * gl.weights[j] * hb * hc * ha / (r * r * r);
          const Direction omega = Direction::normalized(-p);
          coll += d_omega * (1.0 - law.survival(omega, r));
          double radial = 0.0;
          for (int k = 0; k < 16; ++k) {
            const double t = 0.5 * r * (gl.nodes[k] + 1.0);
            radial += gl.weights[k] * law.survival(omega, t);
          }
          flux += d_omega * 0.5 * r * radial;
        }
      }
    }
  }
  coll *= kInvFourPi;
  flux *= kInvFourPi;
}

}  // namespace

TransferLaw transfer_law(const CrossSectionModel& model) {
  return TransferLaw{[model](const Direction& d, double r) { return model.pdf(d, r); },
                     [model](const Direction& d, double r) { return model.survival(d, r); }};
}

KernelTable::KernelTable(std::array<int, 3> reach, double cutoff) : reach_(reach), cutoff_(cutoff) {
  const std::size_t n = static_cast<std::size_t>(2 * reach[0] + 1) * (2 * reach[1] + 1) * (2 * reach[2] + 1);
  collision_.assign(n, 0.0);
  flux_.assign(n, 0.0);
}

std::size_t KernelTable::offset_index(int di, int dj, int dk) const {
  const std::size_t wx = 2 * reach_[0] + 1;
  const std::size_t wy = 2 * reach_[1] + 1;
  return static_cast<std::size_t>(di + reach_[0]) +
         wx * (static_cast<std::size_t>(dj + reach_[1]) + wy * static_cast<std::size_t>(dk + reach_[2]));
}

double KernelTable::stencil_collision_sum() const {
  double acc = 0.0;
  for (double v : collision_) acc += v;
  return acc;
}

double KernelTable::collision_row_sum(const SpatialGrid& grid, std::size_t dest) const {
  const auto c = grid.unravel(dest);
  double acc = 0.0;
  for (int dk = -reach_[2]; dk <= reach_[2]; ++dk) {
    if (c[2] + dk < 0 || c[2] + dk >= grid.n(2)) continue;
    for (int dj = -reach_[1]; dj <= reach_[1]; ++dj) {
      if (c[1] + dj < 0 || c[1] + dj >= grid.n(1)) continue;
      for (int di = -reach_[0]; di <= reach_[0]; ++di) {
        if (c[0] + di < 0 || c[0] + di >= grid.n(0)) continue;
        acc += collision(di, dj, dk);
      }
    }
  }
  return acc;
}

KernelTable build_kernel(const SpatialGrid& grid, const CrossSectionModel& model, double cutoff,
                         int threads) {
  if (cutoff <= 0.0) cutoff = model.s_max();
  return build_kernel(grid, transfer_law(model), cutoff, threads);
}

KernelTable build_kernel(const SpatialGrid& grid, const TransferLaw& law, double cutoff, int threads) {
  if (!(cutoff > 0.0)) throw DomainError("kernel cutoff must be positive");
  std::array<int, 3> reach{};
  bool cut_by_cutoff = false;
  for (int a = 0; a < 3; ++a) {
    const double want = std::ceil(cutoff / grid.h(a) + 0.5);
    const int limit = grid.n(a) - 1;
    if (want < limit) {
      reach[a] = static_cast<int>(want);
      cut_by_cutoff = true;
    } else {
      reach[a] = limit;
    }
  }
  KernelTable k(reach, cutoff);
  const Vec3 h = grid.spacing();
  const double volume = grid.cell_volume();
  const int wz = 2 * reach[2] + 1;

  parallel_for(static_cast<std::size_t>(wz), threads, [&](std::size_t slab) {
    const int dk = static_cast<int>(slab) - reach[2];
    for (int dj = -reach[1]; dj <= reach[1]; ++dj) {
      for (int di = -reach[0]; di <= reach[0]; ++di) {
        const std::size_t idx = k.offset_index(di, dj, dk);
        if (di == 0 && dj == 0 && dk == 0) {
          self_cell(grid, law, k.collision_data()[idx], k.flux_data()[idx]);
          continue;
        }
        const int o[3] = {di, dj, dk};
        double nearest2 = 0.0;
        for (int a = 0; a < 3; ++a) {
          const double gap = std::max(0.0, (std::abs(o[a]) - 0.5) * h[a]);
          nearest2 += gap * gap;
        }
        if (nearest2 > cutoff * cutoff) continue;
        const int cheb = std::max({std::abs(di), std::abs(dj), std::abs(dk)});
        const auto& gl = gauss_legendre_cached(points_for_distance(cheb));
        const int m = static_cast<int>(gl.nodes.size());
        double coll = 0.0;
        double flux = 0.0;
        for (int iz = 0; iz < m; ++iz) {
          for (int iy = 0; iy < m; ++iy) {
            for (int ix = 0; ix < m; ++ix) {
              // x − x′ for a source point inside the offset cell.
              const Vec3 v{-(di * h.x + 0.5 * h.x * gl.nodes[ix]), -(dj * h.y + 0.5 * h.y * gl.nodes[iy]),
                           -(dk * h.z + 0.5 * h.z * gl.nodes[iz])};
              const double r = norm(v);
              const Direction omega = Direction::normalized(v);
              const double w = gl.weights[ix] * gl.weights[iy] * gl.weights[iz] * kInvFourPi / (r * r);
              coll += w * law.q(omega, r);
              flux += w * law.survival(omega, r);
            }
          }
        }
        k.collision_data()[idx] = coll * volume / 8.0;
        k.flux_data()[idx] = flux * volume / 8.0;
      }
    }
  });

  if (cut_by_cutoff) {
    const double deficit = 1.0 - k.stencil_collision_sum();
    if (deficit > 1e-3) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "kernel cutoff " << cutoff << " discards " << deficit
          << " of the collision probability (limit 1e-3); raise the cutoff";
      throw KernelAccuracyError(msg.str());
    }
  }
  return k;
}

std::vector<double> apply_kernel(const SpatialGrid& grid, const KernelTable& kernel,
                                 const std::vector<double>& field, bool flux_part, int threads) {
  if (field.size() != grid.size()) throw DomainError("apply_kernel: field size mismatch");
  const auto& coeff = flux_part ? kernel.flux_data() : kernel.collision_data();
  const auto& r = kernel.reach();
  const int nx = grid.n(0);
  const int ny = grid.n(1);
  const int nz = grid.n(2);
  std::vector<double> out(field.size(), 0.0);
  parallel_for(static_cast<std::size_t>(nz), threads, [&](std::size_t kz) {
    const int k = static_cast<int>(kz);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        double acc = 0.0;
        const int dk_lo = std::max(-r[2], -k);
        const int dk_hi = std::min(r[2], nz - 1 - k);
        const int dj_lo = std::max(-r[1], -j);
        const int dj_hi = std::min(r[1], ny - 1 - j);
        const int di_lo = std::max(-r[0], -i);
        const int di_hi = std::min(r[0], nx - 1 - i);
        for (int dk = dk_lo; dk <= dk_hi; ++dk) {
          for (int dj = dj_lo; dj <= dj_hi; ++dj) {
            const double* c = &coeff[kernel.offset_index(di_lo, dj, dk)];
            const double* f = &field[grid.index(i + di_lo, j + dj, k + dk)];
            for (int n = 0; n <= di_hi - di_lo; ++n) acc += c[n] * f[n];
          }
        }
        out[grid.index(i, j, k)] = acc;
      }
    }
  });
  return out;
}

PicardResult picard_solve(const SpatialGrid& grid, const KernelTable& kernel, double c,
                          const std::vector<double>& source, double tol, int max_iter, int threads) {
  if (!(c >= 0.0 && c < 1.0)) throw DomainError("picard_solve: c must satisfy 0 <= c < 1");
  if (source.size() != grid.size()) throw DomainError("picard_solve: source size mismatch");
  for (double q : source) {
    if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("picard_solve: source must be finite and >= 0");
  }
  PicardResult res;
  std::vector<double> current(grid.size(), 0.0);
  std::vector<double> emission(grid.size());
  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < emission.size(); ++i) emission[i] = c * current[i] + source[i];
    std::vector<double> next = apply_kernel(grid, kernel, emission, false, threads);
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      diff = std::max(diff, std::abs(next[i] - current[i]));
      scale = std::max(scale, std::abs(next[i]));
    }
    const double residual = scale > 0.0 ? diff / scale : 0.0;
    current = std::move(next);
    res.iterations = it;
    res.residual = (c == 0.0) ? 0.0 : residual;
    res.residual_history.push_back(res.residual);
    if (c == 0.0 || residual < tol) {
      res.collision_density = std::move(current);
      return res;
    }
  }
  throw NonConvergenceError("Picard iteration did not reach the tolerance", res.iterations, res.residual);
}

std::vector<double> scalar_flux(const SpatialGrid& grid, const KernelTable& kernel, double c,
                                const std::vector<double>& collision_density,
                                const std::vector<double>& source, int threads) {
  std::vector<double> emission(grid.size());
  for (std::size_t i = 0; i < emission.size(); ++i) emission[i] = c * collision_density[i] + source[i];
  return apply_kernel(grid, kernel, emission, true, threads);
}

double angular_flux(const SpatialGrid& grid, const TransferLaw& law, double c,
                    const std::vector<double>& collision_density, const std::vector<double>& source,
                    const Vec3& x, const Direction& omega) {
  const Box& box = grid.box();
  if (!box.contains(x)) throw DomainError("angular_flux: point lies outside the grid");
  const auto& gl = gauss_legendre_cached(8);
  // March along −Ω from x.
  const Vec3 back = -omega.vec();
  std::array<int, 3> cell = grid.locate(x);
  double tmax[3];
  double tdelta[3];
  int step[3];
  for (int a = 0; a < 3; ++a) {
    const double d = back[a];
    const double h = grid.h(a);
    if (d > 0.0) {
      step[a] = 1;
      tmax[a] = (box.lower[a] + (cell[a] + 1) * h - x[a]) / d;
      tdelta[a] = h / d;
    } else if (d < 0.0) {
      step[a] = -1;
      tmax[a] = (box.lower[a] + cell[a] * h - x[a]) / d;
      tdelta[a] = -h / d;
    } else {
      step[a] = 0;
      tmax[a] = std::numeric_limits<double>::infinity();
      tdelta[a] = tmax[a];
    }
  }
  double t = 0.0;
  double acc = 0.0;
  for (;;) {
    int a = 0;
    if (tmax[1] < tmax[a]) a = 1;
    if (tmax[2] < tmax[a]) a = 2;
    const double t_end = tmax[a];
    if (t_end > t) {
      const std::size_t idx = grid.index(cell[0], cell[1], cell[2]);
      const double e = c * collision_density[idx] + source[idx];
      if (e != 0.0) {
        double seg = 0.0;
        for (std::size_t n = 0; n < gl.nodes.size(); ++n) {
          const double s = t + 0.5 * (t_end - t) * (gl.nodes[n] + 1.0);
          seg += gl.weights[n] * law.survival(omega, s);
        }
        acc += e * 0.5 * (t_end - t) * seg;
      }
      t = t_end;
    }
    if (law.survival(omega, t) < 1e-14) break;
    cell[a] += step[a];
    tmax[a] += tdelta[a];
    if (cell[a] < 0 || cell[a] >= grid.n(a)) break;
  }
  return acc * kInvFourPi;
}

std::vector<double> sample_field(const SpatialGrid& grid, const std::function<double(const Vec3&)>& f) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(grid.center(i));
  return out;
}

}  // namespace nct
