#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "nct/errors.hpp"
#include "nct/phase_function.hpp"
#include "nct/rng.hpp"
#include "nct/sphere_quadrature.hpp"

using namespace nct;

namespace {

const double kFourPi = 4.0 * std::numbers::pi;

// Henyey-Greenstein moments g^n, truncated; nonnegative for moderate g.
std::vector<double> hg_coeffs(double g, int order) {
  std::vector<double> a(order + 1);
  for (int n = 0; n <= order; ++n) a[n] = std::pow(g, n);
  return a;
}

}  // namespace

TEST_CASE("legendre recurrence") {
  double p[5];
  legendre_values(0.3, 4, p);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == doctest::Approx(0.3));
  CHECK(p[2] == doctest::Approx(0.5 * (3 * 0.09 - 1)).epsilon(1e-15));
  CHECK(p[3] == doctest::Approx(0.5 * (5 * 0.027 - 3 * 0.3)).epsilon(1e-15));
  CHECK(p[4] == doctest::Approx((35 * 0.0081 - 30 * 0.09 + 3) / 8.0).epsilon(1e-14));
}

TEST_CASE("phase function values") {
  const PhaseFunction iso;
  for (double mu : {-1.0, 0.0, 0.7}) CHECK(iso(mu) == doctest::Approx(1.0 / kFourPi).epsilon(1e-15));
  CHECK(iso.is_isotropic());

  // 1 + 1.5μ is negative for μ < −2/3; evaluate the series alone.
  CHECK(eval_legendre_series({1.0, 0.5}, 1.0) == doctest::Approx(2.5 / kFourPi).epsilon(1e-15));
  CHECK_THROWS_AS(PhaseFunction({1.0, 0.5}), InvalidModelError);
  const PhaseFunction lin({1.0, 0.25});
  CHECK(lin(1.0) == doctest::Approx(1.75 / kFourPi).epsilon(1e-15));
  CHECK(lin.mean_cosine() == 0.25);

  const PhaseFunction p3({1.0, 0.3, 0.1});
  const auto quad = AngularQuadrature::product(16, 32);
  const Direction z(0.0, 0.0, 1.0);
  CHECK(quad.integrate([&](const Direction& d) { return p3(dot(d, z)); }) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p3.cdf(-1.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(p3.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("phase function validation") {
  CHECK_THROWS_AS(PhaseFunction({0.9, 0.1}), InvalidModelError);
  CHECK_THROWS_AS(PhaseFunction({1.0, 0.9}), InvalidModelError);  // 1 + 2.7μ < 0 at μ = −1
  CHECK_THROWS_AS(PhaseFunction(std::vector<double>(34, 0.0)), InvalidModelError);
  CHECK_NOTHROW(PhaseFunction({1.0, 1.0 / 3.0}));
}

TEST_CASE("combined kernel coefficients") {
  const PhaseFunction pf(hg_coeffs(0.6, 32));
  const auto k = build_pstar(pf, 0.9);
  REQUIRE(k.coeffs().size() == 33);
  CHECK(k.coeffs()[0] == 1.0);
  CHECK(k.coeffs()[1] == doctest::Approx(0.54).epsilon(1e-15));
  for (int n = 1; n <= 32; ++n) CHECK(k.coeffs()[n] == doctest::Approx(0.9 * pf.coeffs()[n]).epsilon(1e-15));
  CHECK(build_pstar(pf, 1.0).coeffs()[1] == 0.6);
  CHECK(build_pstar(pf, 0.0).is_isotropic());
  CHECK_THROWS_AS(build_pstar(pf, 1.2), DomainError);
  CHECK_THROWS_AS(build_pstar(pf, -0.1), DomainError);

  const PhaseFunction p2({1.0, 0.25, 0.1});
  const auto k2 = build_pstar(p2, 0.7);
  for (double mu : {-0.9, 0.0, 0.4, 1.0}) {
    CHECK(k2(mu) == doctest::Approx(0.7 * p2(mu) + 0.3 / kFourPi).epsilon(1e-14));
  }
  const auto quad = AngularQuadrature::product(16, 32);
  const Direction z(0.0, 0.0, 1.0);
  CHECK(quad.integrate([&](const Direction& d) { return k2(dot(d, z)); }) == doctest::Approx(1.0).epsilon(1e-12));
  // 2π ∫ μ P*(μ) dμ = c μ̄₀.
  const double first = quad.integrate([&](const Direction& d) { return d.z() * k2(d.z()); });
  CHECK(std::abs(first - 0.7 * 0.25) < 1e-10);
}

TEST_CASE("scattering cosine sampling") {
  const PhaseFunction iso;
  for (double u : {0.0, 0.1, 0.5, 0.9, 1.0}) CHECK(iso.sample_cosine(u) == doctest::Approx(2 * u - 1).scale(1.0).epsilon(1e-12));
  const PhaseFunction sym({1.0, 0.0, 0.2});
  CHECK(std::abs(sym.sample_cosine(0.5)) < 1e-3);

  const PhaseFunction lin(hg_coeffs(0.4, 16));
  RandomStream rng(5, 0);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += lin.sample_cosine(rng.uniform());
  CHECK(std::abs(sum / n - 0.4) < 0.002);
}

TEST_CASE("cdf table refinement") {
  const PhaseFunction coarse({1.0, 0.3, 0.2, 0.05}, 4096);
  const PhaseFunction fine({1.0, 0.3, 0.2, 0.05}, 8192);
  double worst = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double u = i / 1000.0;
    worst = std::max(worst, std::abs(coarse.cdf(coarse.sample_cosine(u)) - fine.cdf(fine.sample_cosine(u))));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("direction rotation") {
  const Direction z(0.0, 0.0, 1.0);
  const Direction a = rotate_direction(z, 0.0, 0.0);
  CHECK(a.x() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(a.y()) < 1e-15);
  CHECK(std::abs(a.z()) < 1e-15);
  const Direction d = Direction::normalized({0.2, -0.5, 0.3});
  const Direction f = rotate_direction(d, 1.0, 1.3);
  const Direction b = rotate_direction(d, -1.0, 0.4);
  for (int i = 0; i < 3; ++i) {
    CHECK(f[i] == doctest::Approx(d[i]).epsilon(1e-14));
    CHECK(b[i] == doctest::Approx(-d[i]).epsilon(1e-14));
  }

  RandomStream rng(17, 3);
  double worst_norm = 0.0;
  double worst_cos = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double mu = 2.0 * rng.uniform() - 1.0;
    const double ph = 2.0 * std::numbers::pi * rng.uniform();
    const double cz = 2.0 * rng.uniform() - 1.0;
    const double az = 2.0 * std::numbers::pi * rng.uniform();
    const double r = std::sqrt(1.0 - cz * cz);
    const Direction in(r * std::cos(az), r * std::sin(az), cz);
    const Direction out = rotate_direction(in, mu, ph);
    worst_norm = std::max(worst_norm, std::abs(norm(out.vec()) - 1.0));
    worst_cos = std::max(worst_cos, std::abs(dot(in, out) - mu));
  }
  CHECK(worst_norm < 1e-12);
  CHECK(worst_cos < 1e-12);
}
