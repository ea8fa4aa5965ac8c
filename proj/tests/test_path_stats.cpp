#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "model_matrix.hpp"
#include "nct/errors.hpp"
#include "nct/path_stats.hpp"
#include "nct/rng.hpp"

using namespace nct;
using nct::testing::model_matrix;
using nct::testing::probe_directions;

namespace {

const Direction kZ(0.0, 0.0, 1.0);

// Brute-force composite Simpson on [0, b]. Independent of the library's
// adaptive rule.
template <class F>
double simpson(F f, double b, int n = 20000) {
  const double h = b / n;
  double acc = f(0.0) + f(b);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("survival of a constant cross section") {
  const auto m = CrossSectionModel::constant(2.0);
  CHECK(survival_probability(m, kZ, 0.0) == 1.0);
  CHECK(survival_probability(m, kZ, 1.0) == doctest::Approx(0.1353352832366127).epsilon(1e-14));
  CHECK_THROWS_AS(survival_probability(m, kZ, -0.1), DomainError);
}

TEST_CASE("uniform free-path law") {
  const auto m = CrossSectionModel::from_pdf(PathLaw::uniform(1.0));
  const auto q = [&](double s) { return free_path_pdf(m, kZ, s); };
  CHECK(survival_probability(m, kZ, 0.5) == doctest::Approx(1.0 - simpson(q, 0.5)).epsilon(1e-10));
  for (double s : {0.0, 0.2, 0.5, 0.9}) CHECK(q(s) == doctest::Approx(1.0).epsilon(1e-12));

  const FreePathDistribution dist = FreePathDistribution::from_model(m);
  CHECK(sigma_from_pdf(dist, kZ, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sigma_from_pdf(dist, kZ, 0.75) == doctest::Approx(4.0).epsilon(1e-10));

  CHECK(mean_free_path(m, kZ) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(raw_moment(m, kZ, 1) == doctest::Approx(simpson([&](double s) { return s * q(s); }, 1.0 - 1e-12)).epsilon(1e-9));
  CHECK(raw_moment(m, kZ, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(equilibrium_spectrum(m, kZ, 0.5) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pdf at the origin equals the cross section") {
  for (const auto& nm : model_matrix()) {
    for (const auto& d : probe_directions()) {
      CHECK(free_path_pdf(nm.model, d, 0.0) == doctest::Approx(nm.model.sigma(d, 0.0)).epsilon(1e-14));
    }
  }
}

TEST_CASE("exponential law is the constant-sigma case") {
  const auto c = CrossSectionModel::constant(1.7);
  const double q0 = free_path_pdf(c, kZ, 0.0);
  for (double s : {0.1, 1.0, 3.0, 10.0}) {
    CHECK(free_path_pdf(c, kZ, s) / q0 == doctest::Approx(survival_probability(c, kZ, s)).epsilon(1e-13));
  }
  const auto w = CrossSectionModel::from_pdf(PathLaw::weibull(2.0, 1.0));
  const double w0 = free_path_pdf(w, kZ, 1e-3);
  const double ratio = free_path_pdf(w, kZ, 1.0) / w0;
  CHECK(std::abs(ratio - survival_probability(w, kZ, 1.0)) > 0.1);
}

TEST_CASE("invariants over the model matrix") {
  for (const auto& nm : model_matrix()) {
    CAPTURE(nm.name);
    for (const auto& d : probe_directions()) {
      CHECK(pdf_mass(nm.model, d) == doctest::Approx(1.0).epsilon(1e-8));
      double prev = 0.0;
      for (int i = 0; i <= 200; ++i) {
        const double s = 0.025 * i;
        CHECK(nm.model.sigma(d, s) >= 0.0);
        const double t = nm.model.optical_depth(d, s);
        CHECK(t >= prev);
        prev = t;
      }
      const double s1 = mean_free_path(nm.model, d);
      CHECK(s1 > 0.0);
      CHECK(std::abs(s1 - mean_free_path(nm.model, -d)) < 1e-12);
      CHECK(std::abs(raw_moment(nm.model, d, 2) - raw_moment(nm.model, -d, 2)) < 1e-12);
      // χ s_Ω = F pointwise.
      for (double s : {0.0, 0.1, 0.4, 0.9}) {
        CHECK(equilibrium_spectrum(nm.model, d, s) * s1 ==
              doctest::Approx(survival_probability(nm.model, d, s)).epsilon(1e-12));
      }
      const double chi_mass = simpson(
          [&](double s) { return survival_probability(nm.model, d, s); },
          std::min(nm.model.s_max(d), nm.model.support_end(d))) / s1;
      CHECK(chi_mass == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("moments of analytic laws") {
  const double pi = std::numbers::pi;
  const auto c = CrossSectionModel::constant(2.0);
  CHECK(raw_moment(c, kZ, 1) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(raw_moment(c, kZ, 2) == doctest::Approx(0.5).epsilon(1e-10));

  const auto w = CrossSectionModel::from_pdf(PathLaw::weibull(2.0, 1.0));
  CHECK(mean_free_path(w, kZ) == doctest::Approx(std::sqrt(pi) / 2.0).epsilon(1e-10));
  CHECK(raw_moment(w, kZ, 2) == doctest::Approx(1.0).epsilon(1e-10));

  const auto l3 = CrossSectionModel::from_pdf(PathLaw::lomax(3.0, 1.0));
  CHECK(mean_free_path(l3, kZ) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(raw_moment(l3, kZ, 2) == doctest::Approx(1.0).epsilon(1e-6));

  const auto l2 = CrossSectionModel::from_pdf(PathLaw::lomax(2.0, 1.0));
  CHECK(mean_free_path(l2, kZ) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(raw_moment(l2, kZ, 2), DivergentMomentError);
}

TEST_CASE("ensemble means") {
  const auto quad = AngularQuadrature::product(16, 32);
  const auto c = CrossSectionModel::constant(4.0);
  CHECK(ensemble_mean(c, AngularWeight::uniform(), quad, 1) == doctest::Approx(0.25).epsilon(1e-12));
  const auto xi = AngularWeight::polar(kZ, {1.0, 0.0, 2.0});
  CHECK(quad.integrate([&](const Direction& d) { return xi(d); }) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ensemble_mean(c, xi, quad, 1) == doctest::Approx(0.25).epsilon(1e-12));

  // (1/2)∫(1 + μ²) dμ over [−1, 1] = 4/3; ⟨s²⟩ = 2⟨(1 + μ²)²⟩ = 56/15.
  const auto m = nct::testing::one_plus_mu2_model();
  const auto mom = directional_moments(m, AngularWeight::uniform(), quad);
  CHECK(mom.s_mean == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(mom.s2_mean == doctest::Approx(56.0 / 15.0).epsilon(1e-10));
  CHECK_THROWS_AS(AngularWeight::polar(kZ, {0.0, 1.0}), InvalidModelError);
}

TEST_CASE("round trip from the density back to the cross section") {
  for (const auto& nm : model_matrix()) {
    CAPTURE(nm.name);
    const auto dist = FreePathDistribution::from_model(nm.model);
    for (const auto& d : probe_directions()) {
      for (int i = 0; i < 40; ++i) {
        const double s = 0.05 * i;
        if (s >= nm.model.support_end(d) || dist.cdf(d, s) >= 0.999) break;
        const double ref = nm.model.sigma(d, s);
        CHECK(std::abs(sigma_from_pdf(dist, d, s) - ref) <= 1e-10 * ref);
      }
    }
  }
}

TEST_CASE("free-path sampling") {
  const auto c = CrossSectionModel::constant(3.0);
  for (double u : {1e-9, 0.1, 0.5, 0.999}) {
    CHECK(sample_free_path(c, kZ, u) == doctest::Approx(-std::log1p(-u) / 3.0).epsilon(1e-12));
  }
  CHECK(sample_free_path(c, kZ, 1e-15) < 1e-14);
  CHECK(sample_free_path(c, kZ, 1e-15) > 0.0);
  CHECK_THROWS_AS(sample_free_path(c, kZ, 0.0), DomainError);

  for (const auto& nm : model_matrix()) {
    CAPTURE(nm.name);
    const Direction d = Direction::normalized({0.3, -0.4, 0.8});
    for (double t : {0.01, 0.5, 2.0, 10.0}) {
      const double s = invert_optical_depth(nm.model, d, t);
      CHECK(std::abs(nm.model.optical_depth(d, s) - t) < 1e-12 * std::max(1.0, t));
    }
    // KS distance of 2·10⁵ draws against 1 − F.
    const int n = 200000;
    RandomStream rng(91, 0);
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample_free_path(nm.model, d, rng.uniform());
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
      const double f = 1.0 - survival_probability(nm.model, d, xs[i]);
      ks = std::max({ks, (i + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    CHECK(ks < 0.005);
  }
}
