#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "nct/cross_section.hpp"
#include "nct/quadrature_1d.hpp"
#include "nct/sphere_quadrature.hpp"
#include "nct/vec3.hpp"

namespace nct {

/// F(Ω, s) = exp(−∫₀ˢ Σ_t ds′). DomainError for s < 0.
double survival_probability(const CrossSectionModel& model, const Direction& d, double s);

/// q(Ω, s) = Σ_t(Ω, s) F(Ω, s).
double free_path_pdf(const CrossSectionModel& model, const Direction& d, double s);

/// Distance-to-collision law given by its density alone; the cdf is
/// recovered by quadrature.
class FreePathDistribution {
 public:
  using Pdf = std::function<double(const Direction&, double)>;
  using Breakpoints = std::function<std::vector<double>(const Direction&)>;

  explicit FreePathDistribution(Pdf pdf, Breakpoints breakpoints = {});
  static FreePathDistribution from_model(const CrossSectionModel& model);

  double pdf(const Direction& d, double s) const;
  /// ∫₀ˢ q ds′, clamped to [0, 1].
  double cdf(const Direction& d, double s) const;

 private:
  Pdf pdf_;
  Breakpoints breakpoints_;
};

/// Σ_t = q / (1 − ∫₀ˢ q). SingularTailError when the cdf is within 1e-14 of 1.
double sigma_from_pdf(const FreePathDistribution& q, const Direction& d, double s);

/// s_Ω(Ω) = ∫₀^∞ F ds.
double mean_free_path(const CrossSectionModel& model, const Direction& d);
/// ∫₀^∞ s^m q ds for m in {1, 2}. DivergentMomentError when the integrand
/// does not decay past s_max.
double raw_moment(const CrossSectionModel& model, const Direction& d, int m);
/// ∫₀^∞ q ds; 1 for a proper law.
double pdf_mass(const CrossSectionModel& model, const Direction& d);

/// χ(Ω, s) = F(Ω, s) / s_Ω(Ω).
double equilibrium_spectrum(const CrossSectionModel& model, const Direction& d, double s);

/// Angular density ξ(Ω) over the sphere, normalized to 1.
class AngularWeight {
 public:
  static AngularWeight uniform();
  /// ξ ∝ Σ c_k μ^k with μ = Ω·axis; must be nonnegative.
  static AngularWeight polar(Direction axis, std::vector<double> coeffs);

  double operator()(const Direction& d) const;
  bool is_uniform() const { return coeffs_.empty(); }

 private:
  Direction axis_{0.0, 0.0, 1.0};
  std::vector<double> coeffs_;
  double scale_ = 0.0;
};

struct DirectionalMoments {
  std::vector<double> s1;  // per quadrature node
  std::vector<double> s2;  // empty unless requested
  double s_mean = 0.0;
  double s2_mean = std::numeric_limits<double>::quiet_NaN();
};

/// s_Ω and (optionally) s²_Ω at every node plus their ξ-weighted means.
DirectionalMoments directional_moments(const CrossSectionModel& model, const AngularWeight& xi,
                                       const AngularQuadrature& quad, bool second = true);

/// Σ_k w_k ξ(Ω_k) s^m_Ω(Ω_k).
double ensemble_mean(const CrossSectionModel& model, const AngularWeight& xi,
                     const AngularQuadrature& quad, int m);

/// Distance s with optical_depth(d, s) = t, by bracketing and safeguarded
/// Newton steps (tolerance 1e-12 in optical depth).
double invert_optical_depth(const CrossSectionModel& model, const Direction& d, double t);

/// Inverse-cdf draw: optical depth −ln(1 − u). TailOverflowError when that
/// depth lies past s_limit().
double sample_free_path(const CrossSectionModel& model, const Direction& d, double u);

}  // namespace nct
