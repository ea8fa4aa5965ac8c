#pragma once

#include <memory>
#include <vector>

#include "nct/vec3.hpp"

namespace nct {

/// Legendre polynomials P_0..P_n at x by the three-term recurrence.
void legendre_values(double x, int n, double* out);

/// P(μ₀) = Σ (2n+1)/4π a_n P_n(μ₀), a_0 = 1, order <= 32.
class PhaseFunction {
 public:
  static constexpr int kMaxOrder = 32;
  static constexpr int kDefaultCdfPoints = 4096;

  PhaseFunction() : PhaseFunction(std::vector<double>{1.0}) {}
  /// Checks a_0 = 1, order, and nonnegativity on 1001 Chebyshev-Lobatto
  /// points (InvalidModelError). Builds the sampling table.
  explicit PhaseFunction(std::vector<double> coeffs, int cdf_points = kDefaultCdfPoints);

  static PhaseFunction isotropic() { return PhaseFunction(); }

  const std::vector<double>& coeffs() const { return coeffs_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  double mean_cosine() const { return coeffs_.size() > 1 ? coeffs_[1] : 0.0; }
  bool is_isotropic() const;

  /// Density per steradian.
  double operator()(double mu0) const;
  /// 2π ∫₋₁^μ P dμ′, exact for the expansion.
  double cdf(double mu) const;
  /// Inverse-cdf lookup with linear interpolation in the table.
  double sample_cosine(double u) const;

 private:
  std::vector<double> coeffs_;
  std::shared_ptr<const std::vector<double>> cdf_table_;  // cdf at μ_i = −1 + 2i/(n−1)
};

/// P*(μ₀) = cP(μ₀) + (1 − c)/4π with a*_0 = 1 and a*_n = c a_n.
class ScatteringKernel {
 public:
  ScatteringKernel(std::vector<double> star_coeffs, double c)
      : coeffs_(std::move(star_coeffs)), c_(c) {}

  const std::vector<double>& coeffs() const { return coeffs_; }
  double c() const { return c_; }
  /// a*_1 = c μ̄₀.
  double first_moment() const { return coeffs_.size() > 1 ? coeffs_[1] : 0.0; }
  bool is_isotropic() const;
  double operator()(double mu0) const;

 private:
  std::vector<double> coeffs_;
  double c_;
};

/// DomainError unless 0 <= c <= 1.
ScatteringKernel build_pstar(const PhaseFunction& pf, double c);

/// Evaluates a Legendre series Σ (2n+1)/4π a_n P_n(μ₀).
double eval_legendre_series(const std::vector<double>& a, double mu0);

/// Direction at cosine mu0 and azimuth phi about `incoming`.
Direction rotate_direction(const Direction& incoming, double mu0, double phi);

}  // namespace nct
