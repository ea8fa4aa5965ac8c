#include "nct/phase_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nct/errors.hpp"

namespace nct {

namespace {
constexpr double kInvFourPi = 0.25 / std::numbers::pi;
}

void legendre_values(double x, int n, double* out) {
  out[0] = 1.0;
  if (n >= 1) out[1] = x;
  for (int k = 2; k <= n; ++k) {
    out[k] = ((2.0 * k - 1.0) * x * out[k - 1] - (k - 1.0) * out[k - 2]) / k;
  }
}

double eval_legendre_series(const std::vector<double>& a, double mu0) {
  const int n = static_cast<int>(a.size()) - 1;
  double p[PhaseFunction::kMaxOrder + 2];
  legendre_values(mu0, n, p);
  double acc = 0.0;
  for (int k = n; k >= 0; --k) acc += (2.0 * k + 1.0) * a[k] * p[k];
  return acc * kInvFourPi;
}

PhaseFunction::PhaseFunction(std::vector<double> coeffs, int cdf_points) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty() || coeffs_[0] != 1.0) {
    throw InvalidModelError("phase function: a_0 must equal 1");
  }
  if (order() > kMaxOrder) {
    throw InvalidModelError("phase function: expansion order " + std::to_string(order()) +
                            " exceeds the cap of 32");
  }
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw InvalidModelError("phase function: non-finite coefficient");
  }
  if (cdf_points < 2) throw DomainError("phase function: cdf table needs at least 2 points");
  const int n_check = 1001;
  for (int i = 0; i < n_check; ++i) {
    const double mu = -std::cos(std::numbers::pi * i / (n_check - 1));
    const double v = (*this)(mu);
    if (v < -1e-12) {
      throw InvalidModelError("phase function is negative (" + std::to_string(v) +
                              ") at mu0 = " + std::to_string(mu));
    }
  }
  auto table = std::make_shared<std::vector<double>>(cdf_points);
  for (int i = 0; i < cdf_points; ++i) {
    const double mu = -1.0 + 2.0 * i / (cdf_points - 1);
    (*table)[i] = cdf(mu);
  }
  (*table)[0] = 0.0;
  (*table)[cdf_points - 1] = 1.0;
  // Round-off near flat stretches can break monotonicity by an ulp.
  for (int i = 1; i < cdf_points; ++i) (*table)[i] = std::clamp((*table)[i], (*table)[i - 1], 1.0);
  cdf_table_ = std::move(table);
}

bool PhaseFunction::is_isotropic() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double a) { return a == 0.0; });
}

double PhaseFunction::operator()(double mu0) const { return eval_legendre_series(coeffs_, mu0); }

double PhaseFunction::cdf(double mu) const {
  mu = std::clamp(mu, -1.0, 1.0);
  // ∫₋₁^μ P_n = (P_{n+1} − P_{n−1})/(2n+1) for n >= 1.
  const int n = order();
  double p[kMaxOrder + 2];
  legendre_values(mu, n + 1, p);
  double acc = mu + 1.0;
  for (int k = 1; k <= n; ++k) acc += coeffs_[k] * (p[k + 1] - p[k - 1]);
  return 0.5 * acc;
}

double PhaseFunction::sample_cosine(double u) const {
  const auto& t = *cdf_table_;
  const std::size_t n = t.size();
  auto it = std::upper_bound(t.begin(), t.end(), u);
  std::size_t hi = static_cast<std::size_t>(it - t.begin());
  if (hi == 0) return -1.0;
  if (hi >= n) return 1.0;
  const std::size_t lo = hi - 1;
  const double span = t[hi] - t[lo];
  const double w = span > 0.0 ? (u - t[lo]) / span : 0.5;
  const double h = 2.0 / static_cast<double>(n - 1);
  return std::clamp(-1.0 + h * (static_cast<double>(lo) + w), -1.0, 1.0);
}

bool ScatteringKernel::is_isotropic() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double a) { return a == 0.0; });
}

double ScatteringKernel::operator()(double mu0) const { return eval_legendre_series(coeffs_, mu0); }

ScatteringKernel build_pstar(const PhaseFunction& pf, double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError("scattering probability c must lie in [0, 1]");
  std::vector<double> a = pf.coeffs();
  for (std::size_t n = 1; n < a.size(); ++n) a[n] *= c;
  while (a.size() > 1 && a.back() == 0.0) a.pop_back();
  return ScatteringKernel(std::move(a), c);
}

Direction rotate_direction(const Direction& incoming, double mu0, double phi) {
  mu0 = std::clamp(mu0, -1.0, 1.0);
  const double st = std::sqrt(std::max(0.0, (1.0 - mu0) * (1.0 + mu0)));
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  const double u = incoming.x();
  const double v = incoming.y();
  const double w = incoming.z();
  const double r2 = 1.0 - w * w;
  Vec3 out;
  if (r2 < 1e-20) {
    const double sgn = w > 0.0 ? 1.0 : -1.0;
    out = Vec3{st * cp, sgn * st * sp, sgn * mu0};
  } else {
    const double r = std::sqrt(r2);
    out = Vec3{u * mu0 + st * (u * w * cp - v * sp) / r,
               v * mu0 + st * (v * w * cp + u * sp) / r,
               w * mu0 - st * r * cp};
  }
  return Direction::normalized(out);
}

}  // namespace nct
