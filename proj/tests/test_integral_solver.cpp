#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "model_matrix.hpp"
#include "nct/errors.hpp"
#include "nct/integral_solver.hpp"
#include "nct/quadrature_1d.hpp"
#include "nct/source.hpp"

using namespace nct;

namespace {

const double kFourPi = 4.0 * std::numbers::pi;

SpatialGrid cube(double half, int n) { return SpatialGrid(Box::centered(half), {n, n, n}); }

std::vector<double> gaussian_field(const SpatialGrid& g, double width) {
  SourceSpec s;
  s.kind = SourceSpec::Kind::gaussian;
  s.strength = 1.0;
  s.width = width;
  return source_density_field(s, g.box(), g);
}

}  // namespace

TEST_CASE("kernel coefficients are nonnegative sub-probabilities") {
  const auto g = cube(4.5, 9);
  const auto k = build_kernel(g, CrossSectionModel::constant(1.0));
  for (double v : k.collision_data()) CHECK(v >= 0.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, k.collision_row_sum(g, i));
  CHECK(worst <= 1.0 + 1e-6);

  const auto km = build_kernel(g, nct::testing::quadratic_weibull_model());
  for (double v : km.collision_data()) CHECK(v >= 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(km.collision_row_sum(g, i) <= 1.0 + 1e-6);
}

TEST_CASE("constant cross section kernel is the exponential point kernel") {
  const double sigma = 1.0;
  const double h = 0.25;
  const auto g = cube(6.5 * h, 13);
  const auto k = build_kernel(g, CrossSectionModel::constant(sigma));
  const double v = g.cell_volume();
  const auto& gl = gauss_legendre(24);
  int tested = 0;
  for (int di = 0; di <= 6; ++di)
    for (int dj = 0; dj <= di; ++dj)
      for (int dk = 0; dk <= dj; ++dk) {
        const double cells = std::sqrt(double(di * di + dj * dj + dk * dk));
        if (cells <= 2.0) continue;
        // 24³ Gauss-Legendre cell integral of σe^{−σr}/(4πr²).
        double ref = 0.0;
        for (int a = 0; a < 24; ++a)
          for (int b = 0; b < 24; ++b)
            for (int c = 0; c < 24; ++c) {
              const Vec3 x{(di + 0.5 * gl.nodes[a]) * h, (dj + 0.5 * gl.nodes[b]) * h, (dk + 0.5 * gl.nodes[c]) * h};
              const double r = norm(x);
              ref += gl.weights[a] * gl.weights[b] * gl.weights[c] * sigma * std::exp(-sigma * r) / (kFourPi * r * r);
            }
        ref *= v / 8.0;
        const double kv = k.collision(di, dj, dk);
        CHECK(std::abs(kv / ref - 1.0) < (std::max({di, dj, dk}) <= 4 ? 1e-6 : 1e-3));
        // The cell average exceeds the centre value by about h²∇²f/(24f),
        // which stays above 2% up to roughly three cell widths.
        if (cells >= 4.0) {
          const double r = h * cells;
          const double point = sigma * std::exp(-sigma * r) / (kFourPi * r * r) * v;
          CHECK(std::abs(kv / point - 1.0) < 0.02);
        }
        ++tested;
      }
  CHECK(tested > 60);
}

TEST_CASE("total collision probability in a wide stencil") {
  const auto g = cube(7.5, 15);
  const auto k = build_kernel(g, CrossSectionModel::constant(1.0));
  const double centre = k.collision_row_sum(g, g.index(7, 7, 7));
  CHECK(centre == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(centre <= 1.0 + 1e-6);
}

TEST_CASE("even models give antipodally symmetric kernels") {
  const auto g = cube(3.0, 6);
  const auto k = build_kernel(g, nct::testing::quadratic_weibull_model());
  const auto& r = k.reach();
  for (int di = -r[0]; di <= r[0]; ++di)
    for (int dj = -r[1]; dj <= r[1]; ++dj)
      for (int dk = -r[2]; dk <= r[2]; ++dk) {
        const double a = k.collision(di, dj, dk);
        const double b = k.collision(-di, -dj, -dk);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(a, 1e-300));
      }
}

TEST_CASE("short cutoff is reported") {
  const auto g = cube(6.0, 12);
  CHECK_THROWS_AS(build_kernel(g, CrossSectionModel::constant(1.0), 1.5), KernelAccuracyError);
}

TEST_CASE("pure absorber needs a single application") {
  const auto g = cube(3.0, 7);
  const auto k = build_kernel(g, CrossSectionModel::constant(1.0));
  const auto q = gaussian_field(g, 0.8);
  const auto once = apply_kernel(g, k, q, false);
  const auto res = picard_solve(g, k, 0.0, q);
  CHECK(res.iterations <= 2);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(res.collision_density[i] == doctest::Approx(once[i]).epsilon(1e-14));
}

TEST_CASE("uniform source far from the boundary") {
  const auto g = cube(7.5, 15);
  const auto k = build_kernel(g, CrossSectionModel::constant(1.0));
  const double c = 0.5;
  const std::vector<double> q(g.size(), 1.0);
  const auto res = picard_solve(g, k, c, q, 1e-12);
  CHECK(res.collision_density[g.index(7, 7, 7)] == doctest::Approx(1.0 / (1.0 - c)).epsilon(0.01));
  for (std::size_t n = 1; n < res.residual_history.size(); ++n) {
    CHECK(res.residual_history[n] < res.residual_history[n - 1]);
    CHECK(res.residual_history[n] / res.residual_history[n - 1] <= c + 0.02);
  }
  const auto phi = scalar_flux(g, k, c, res.collision_density, q);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(phi[i] == doctest::Approx(res.collision_density[i]).epsilon(0.01));
  }
}

TEST_CASE("uncollided flux of a compact source") {
  const double sigma = 1.0;
  const auto g = cube(7.5, 15);
  const auto k = build_kernel(g, CrossSectionModel::constant(sigma));
  std::vector<double> q(g.size(), 0.0);
  q[g.index(7, 7, 7)] = 1.0 / g.cell_volume();
  const auto res = picard_solve(g, k, 0.0, q);
  const auto phi = scalar_flux(g, k, 0.0, res.collision_density, q);
  int tested = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = norm(g.center(i));
    if (r < 3.0) continue;
    const double expected = std::exp(-sigma * r) / (kFourPi * r * r);
    CHECK(phi[i] == doctest::Approx(expected).epsilon(0.05));
    ++tested;
  }
  CHECK(tested > 1000);
}

TEST_CASE("angular flux at the centre of a uniform region") {
  const auto model = nct::testing::one_plus_mu2_model();
  const auto g = cube(10.0, 15);
  const auto k = build_kernel(g, model);
  const std::vector<double> q(g.size(), 1.0);
  const auto res = picard_solve(g, k, 0.5, q, 1e-10);
  const auto law = transfer_law(model);
  const Vec3 o{0.0, 0.0, 0.0};
  const double pz = angular_flux(g, law, 0.5, res.collision_density, q, o, Direction(0.0, 0.0, 1.0));
  const double px = angular_flux(g, law, 0.5, res.collision_density, q, o, Direction(1.0, 0.0, 0.0));
  const double pd = angular_flux(g, law, 0.5, res.collision_density, q, o, Direction::normalized({1.0, 0.0, 1.0}));
  CHECK(pz / px == doctest::Approx(2.0).epsilon(0.03));
  CHECK(pd / px == doctest::Approx(1.5).epsilon(0.03));
}

TEST_CASE("grid refinement converges at first order or better") {
  // Central region of the coarse grid, averaged on each refinement.
  const auto model = CrossSectionModel::constant(1.0);
  std::vector<double> centre;
  for (int n : {3, 6, 12}) {
    const auto g = cube(1.5, n);
    const auto k = build_kernel(g, model);
    const auto res = picard_solve(g, k, 0.5, gaussian_field(g, 0.5), 1e-12);
    const int m = n / 3;
    double acc = 0.0;
    for (int i = m; i < 2 * m; ++i)
      for (int j = m; j < 2 * m; ++j)
        for (int l = m; l < 2 * m; ++l) acc += res.collision_density[g.index(i, j, l)];
    centre.push_back(acc / (m * m * m));
  }
  const double order = std::log2(std::abs(centre[0] - centre[1]) / std::abs(centre[1] - centre[2]));
  CAPTURE(centre[0]);
  CAPTURE(centre[1]);
  CAPTURE(centre[2]);
  CHECK(order >= 0.8);
}
