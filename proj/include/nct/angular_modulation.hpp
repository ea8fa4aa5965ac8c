#pragma once

#include <array>
#include <vector>

#include "nct/vec3.hpp"

namespace nct {

/// Even, positive angular factor m(Ω) multiplying a base cross section.
class AngularModulation {
 public:
  enum class Form { polynomial, inverse_polynomial, quadratic, inverse_quadratic };

  /// m = Σ c_k μ^k with μ = Ω·axis (or its reciprocal). Odd coefficients
  /// break m(Ω) = m(−Ω) and are rejected.
  static AngularModulation polynomial(Direction axis, std::vector<double> coeffs, bool inverse);
  /// m = ΩᵀAΩ (or its reciprocal), A symmetric.
  static AngularModulation quadratic(std::array<std::array<double, 3>, 3> a, bool inverse);

  double operator()(const Direction& d) const;

  Form form() const { return form_; }
  /// Extremes of m over a validation grid of directions.
  double min_value() const { return min_; }
  double max_value() const { return max_; }
  /// Polar axis when m depends on Ω·axis only.
  bool axisymmetric() const { return form_ == Form::polynomial || form_ == Form::inverse_polynomial; }
  const Direction& axis() const { return axis_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  void validate();
  double raw(const Vec3& v) const;

  Form form_ = Form::polynomial;
  Direction axis_{0.0, 0.0, 1.0};
  std::vector<double> coeffs_{1.0};
  std::array<std::array<double, 3>, 3> a_{};
  double min_ = 1.0;
  double max_ = 1.0;
};

}  // namespace nct
