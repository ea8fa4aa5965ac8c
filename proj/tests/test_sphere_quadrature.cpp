#include <cmath>
#include <numbers>

#include "doctest.h"
#include "model_matrix.hpp"
#include "nct/diffusion.hpp"
#include "nct/errors.hpp"
#include "nct/path_stats.hpp"
#include "nct/sphere_quadrature.hpp"

using namespace nct;

namespace {
const double kFourPi = 4.0 * std::numbers::pi;
}

TEST_CASE("product rule basics") {
  const auto q = AngularQuadrature::product(8, 16);
  CHECK(q.size() == 128);
  double wsum = 0.0;
  for (double w : q.weights()) wsum += w;
  CHECK(std::abs(wsum - kFourPi) < 1e-12);
  for (std::size_t k = 0; k < q.size(); ++k) {
    const std::size_t a = q.antipode(k);
    CHECK(q.weight(a) == q.weight(k));
    CHECK(q.node(a) == -q.node(k));
    CHECK(std::abs(norm(q.node(k).vec()) - 1.0) < 1e-12);
  }
  CHECK(std::abs(q.integrate([](const Direction&) { return 1.0; }) - kFourPi) < 1e-13);
  CHECK(std::abs(q.integrate([](const Direction& d) { return d.x(); })) < 1e-13);
  CHECK(std::abs(q.integrate([](const Direction& d) { return d.z() * d.z(); }) - kFourPi / 3.0) < 1e-12);
}

TEST_CASE("polynomial exactness") {
  const int np = 6;
  const auto q = AngularQuadrature::product(np, 16);
  // ∫ μ^(2m) dΩ = 4π/(2m + 1) up to degree 2·n_polar − 2.
  for (int m = 0; 2 * m <= 2 * np - 2; ++m) {
    const double got = q.integrate([&](const Direction& d) { return std::pow(d.z(), 2 * m); });
    CHECK(std::abs(got - kFourPi / (2 * m + 1)) < 1e-12);
  }
  // ∫ x²y² dΩ = 4π/15, ∫ x⁴ dΩ = 4π/5.
  CHECK(std::abs(q.integrate([](const Direction& d) { return d.x() * d.x() * d.y() * d.y(); }) - kFourPi / 15.0) < 1e-12);
  CHECK(std::abs(q.integrate([](const Direction& d) { return std::pow(d.x(), 4); }) - kFourPi / 5.0) < 1e-12);
  // Azimuthal harmonics below n_azimuthal vanish.
  for (int k = 1; k < 16; ++k) {
    const double got = q.integrate([&](const Direction& d) { return std::cos(k * std::atan2(d.y(), d.x())); });
    CHECK(std::abs(got) < 1e-12);
  }
}

TEST_CASE("kernel integrals") {
  const auto q = AngularQuadrature::product(16, 32);
  const auto k = build_pstar(PhaseFunction({1.0, 0.4, 0.1}), 0.8);
  const Direction w = Direction::normalized({0.3, 0.4, -0.2});
  CHECK(std::abs(q.integrate([&](const Direction& d) { return k(dot(d, w)); }) - 1.0) < 1e-10);
  const Vec3 v = q.integrate([&](const Direction& d) { return d.vec() * k(dot(d, w)); });
  for (int a = 0; a < 3; ++a) CHECK(std::abs(v[a] - 0.8 * 0.4 * w[a]) < 1e-8);
  CHECK(std::abs(q.integrate([](const Direction&) { return 2.5; }) - kFourPi * 2.5) < 1e-12);
}

TEST_CASE("odd integrands cancel") {
  const auto q = AngularQuadrature::product(16, 32);
  const auto model = nct::testing::quadratic_weibull_model();
  const auto k = build_pstar(PhaseFunction({1.0, 0.3}), 0.9);
  const auto s_hat = compute_S_hat(model, k, q);
  Vec3 acc;
  for (std::size_t i = 0; i < q.size(); ++i) acc += s_hat[i] * q.weight(i);
  CHECK(norm(acc) < 1e-10);
  const Vec3 total = q.integrate([&](const Direction& d) { return d.vec() * mean_free_path(model, d); });
  CHECK(norm(total) < 1e-10);
}

TEST_CASE("quadrature resolution rejects odd or small counts") {
  CHECK_THROWS_AS(AngularQuadrature::product(7, 16), ConfigError);
  CHECK_THROWS_AS(AngularQuadrature::product(8, 10), ConfigError);
  CHECK_THROWS_AS(AngularQuadrature::product(0, 16), ConfigError);
  CHECK_THROWS_AS(AngularQuadrature::product(8, 0), ConfigError);
}

TEST_CASE("default resolution is converged for the tensor") {
  const auto model = nct::testing::one_plus_mu2_model();
  const auto k = build_pstar(PhaseFunction(), 0.9);
  const auto d1 = diffusion_tensor(model, k, AngularWeight::uniform(), AngularQuadrature::product(32, 64));
  const auto d2 = diffusion_tensor(model, k, AngularWeight::uniform(), AngularQuadrature::product(64, 128));
  CHECK(std::abs(d1.zz - d2.zz) < 1e-8 * d2.zz);
  CHECK(std::abs(d1.xx - d2.xx) < 1e-8 * d2.xx);
}
