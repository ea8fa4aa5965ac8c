#include "nct/reduce_check.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nct/diffusion.hpp"
#include "nct/errors.hpp"
#include "nct/integral_solver.hpp"
#include "nct/path_stats.hpp"
#include "nct/quadrature_1d.hpp"

namespace nct {

bool ReduceReport::all_passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

RunDocument default_reduce_document() {
  return parse_config(R"({
    "schema_version": 1,
    "model": {"kind": "constant", "sigma": 1.0},
    "phase": {"legendre": [1.0, 0.3]},
    "c": 0.5
  })");
}

namespace {

void record(ReduceReport& rep, const char* name, double deviation, double tolerance) {
  rep.checks.push_back({name, deviation, tolerance, std::isfinite(deviation) && deviation <= tolerance});
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

ReduceReport reduce_check(const RunDocument& doc, int threads) {
  if (doc.model.kind() != CrossSectionModel::Kind::constant) {
    throw ConfigError("model.kind", "reduce-check requires a constant model");
  }
  if (!(doc.c < 1.0)) throw ConfigError("c", "reduce-check requires c < 1");

  ReduceReport rep;
  const Direction z(0.0, 0.0, 1.0);
  const double sigma = doc.model.sigma(z, 0.0);
  rep.sigma = sigma;
  rep.c = doc.c;
  rep.mean_cosine = doc.phase.mean_cosine();
  const AngularQuadrature quad = doc.angular_quadrature();

  // q(Ω, s) = σ e^{−σs}, and Σ = q/(1 − cdf) recovers σ.
  {
    double dev_q = 0.0;
    double dev_sigma = 0.0;
    const auto dist = FreePathDistribution::from_model(doc.model);
    for (std::size_t k = 0; k < quad.size(); k += 37) {
      const Direction& d = quad.node(k);
      for (int i = 0; i <= 40; ++i) {
        const double s = i * 0.75 / sigma;
        dev_q = std::max(dev_q, rel(free_path_pdf(doc.model, d, s), sigma * std::exp(-sigma * s)));
      }
    }
    // The cdf comes from adaptive quadrature of q: a handful of directions.
    for (std::size_t k = 0; k < quad.size(); k += quad.size() / 8 + 1) {
      const Direction& d = quad.node(k);
      for (int i = 0; i <= 30; ++i) {
        const double s = i * 0.25 / sigma;
        if (1.0 - std::exp(-sigma * s) < 0.999) dev_sigma = std::max(dev_sigma, rel(sigma_from_pdf(dist, d, s), sigma));
      }
    }
    record(rep, "q_exponential", dev_q, 1e-12);
    record(rep, "sigma_from_q", dev_sigma, 1e-10);
  }

  const double s_mean = ensemble_mean(doc.model, doc.xi, quad, 1);
  record(rep, "mean_free_path", rel(s_mean, 1.0 / sigma), 1e-10);
  record(rep, "mean_square_free_path", rel(ensemble_mean(doc.model, doc.xi, quad, 2), 2.0 / (sigma * sigma)), 1e-10);

  // Integral formulation on 7³ cells of one mean free path.
  const SpatialGrid grid(Box::centered(3.5 / sigma), {7, 7, 7});
  const double h = grid.h(0);
  const KernelTable kernel = build_kernel(grid, doc.model, 0.0, threads);
  {
    // Reference: σ e^{−σr}/(4πr²) from the destination centre, integrated
    // over the source cell with an 8-point product rule.
    const auto gl = gauss_legendre(8);
    double dev = 0.0;
    const auto& reach = kernel.reach();
    for (int dk = -reach[2]; dk <= reach[2]; ++dk) {
      for (int dj = -reach[1]; dj <= reach[1]; ++dj) {
        for (int di = -reach[0]; di <= reach[0]; ++di) {
          if (di * di + dj * dj + dk * dk <= 4) continue;
          double ref = 0.0;
          for (std::size_t a = 0; a < gl.nodes.size(); ++a) {
            for (std::size_t b = 0; b < gl.nodes.size(); ++b) {
              for (std::size_t e = 0; e < gl.nodes.size(); ++e) {
                const Vec3 p{h * (di + 0.5 * gl.nodes[a]), h * (dj + 0.5 * gl.nodes[b]), h * (dk + 0.5 * gl.nodes[e])};
                const double r = norm(p);
                ref += gl.weights[a] * gl.weights[b] * gl.weights[e] * sigma * std::exp(-sigma * r) /
                       (4.0 * std::numbers::pi * r * r);
              }
            }
          }
          ref *= grid.cell_volume() / 8.0;
          dev = std::max(dev, rel(kernel.collision(di, dj, dk), ref));
        }
      }
    }
    record(rep, "kernel_form", dev, 2e-2);
  }

  const std::vector<double> source(grid.size(), 1.0);
  const PicardResult pic = picard_solve(grid, kernel, doc.c, source, 1e-13, 2000, threads);
  const std::vector<double> phi = scalar_flux(grid, kernel, doc.c, pic.collision_density, source, threads);
  {
    double dev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) dev = std::max(dev, rel(pic.collision_density[i], sigma * phi[i]));
    record(rep, "collision_flux", dev, 1e-2);
  }

  // φ = ∫ (c σ φ + Q) e^{−σr}/(4πr²) dV′ iterated directly on φ.
  {
    TransferLaw classic;
    classic.q = [sigma](const Direction&, double r) { return sigma * std::exp(-sigma * r); };
    classic.survival = [sigma](const Direction&, double r) { return std::exp(-sigma * r); };
    const KernelTable ck = build_kernel(grid, classic, kernel.cutoff(), threads);
    std::vector<double> cphi(grid.size(), 0.0);
    std::vector<double> rhs(grid.size());
    double change = 1.0;
    for (int it = 0; it < 5000 && change > 1e-14; ++it) {
      for (std::size_t i = 0; i < grid.size(); ++i) rhs[i] = doc.c * sigma * cphi[i] + source[i];
      std::vector<double> next = apply_kernel(grid, ck, rhs, true, threads);
      double dmax = 0.0, vmax = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        dmax = std::max(dmax, std::abs(next[i] - cphi[i]));
        vmax = std::max(vmax, std::abs(next[i]));
      }
      change = dmax / vmax;
      cphi.swap(next);
    }
    double dev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) dev = std::max(dev, rel(phi[i], cphi[i]));
    record(rep, "classical_integral", dev, 1e-8);
  }

  const DiffusionTensor d = diffusion_tensor(doc.model, doc.kernel(), doc.xi, quad, doc.diffusion.series_tol,
                                              doc.diffusion.max_terms);
  {
    const double want = 1.0 / (3.0 * sigma * (1.0 - doc.c * rep.mean_cosine));
    const double diag = std::max({rel(d.xx, want), rel(d.yy, want), rel(d.zz, want)});
    record(rep, "diffusion_coefficient", diag, 1e-8);
    record(rep, "diffusion_off_diagonal", std::max({std::abs(d.xy), std::abs(d.xz), std::abs(d.yz)}), 1e-12);
    const double removal = sigma * (1.0 - doc.c);
    record(rep, "removal", removal == 0.0 ? std::abs(d.removal) : rel(d.removal, removal), 1e-12);
  }
  return rep;
}

}  // namespace nct
