#include "nct/angular_modulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nct/errors.hpp"

namespace nct {

AngularModulation AngularModulation::polynomial(Direction axis, std::vector<double> coeffs,
                                                bool inverse) {
  if (coeffs.empty()) throw InvalidModelError("modulation: empty coefficient list");
  for (std::size_t k = 1; k < coeffs.size(); k += 2) {
    if (coeffs[k] != 0.0) {
      throw InvalidModelError("modulation: coefficient of mu^" + std::to_string(k) +
                              " is nonzero; m(Omega) must be even, m(Omega) = m(-Omega)");
    }
  }
  AngularModulation m;
  m.form_ = inverse ? Form::inverse_polynomial : Form::polynomial;
  m.axis_ = axis;
  m.coeffs_ = std::move(coeffs);
  m.validate();
  return m;
}

AngularModulation AngularModulation::quadratic(std::array<std::array<double, 3>, 3> a,
                                               bool inverse) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (!std::isfinite(a[i][j])) throw InvalidModelError("modulation: non-finite matrix entry");
      if (std::abs(a[i][j] - a[j][i]) > 1e-14 * (std::abs(a[i][j]) + std::abs(a[j][i]))) {
        throw InvalidModelError("modulation: quadratic-form matrix must be symmetric");
      }
    }
  }
  AngularModulation m;
  m.form_ = inverse ? Form::inverse_quadratic : Form::quadratic;
  m.a_ = a;
  m.validate();
  return m;
}

double AngularModulation::raw(const Vec3& v) const {
  switch (form_) {
    case Form::polynomial:
    case Form::inverse_polynomial: {
      const double mu = dot(axis_.vec(), v);
      double acc = 0.0;
      for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * mu + coeffs_[k];
      return acc;
    }
    case Form::quadratic:
    case Form::inverse_quadratic: {
      double acc = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) acc += v[i] * a_[i][j] * v[j];
      }
      return acc;
    }
  }
  return 0.0;
}

double AngularModulation::operator()(const Direction& d) const {
  const double r = raw(d.vec());
  return (form_ == Form::inverse_polynomial || form_ == Form::inverse_quadratic) ? 1.0 / r : r;
}

void AngularModulation::validate() {
  min_ = std::numeric_limits<double>::infinity();
  max_ = 0.0;
  auto probe = [&](const Vec3& v) {
    const double r = raw(v);
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw InvalidModelError("modulation: m(Omega) must be positive and finite on the sphere");
    }
    const double value =
        (form_ == Form::inverse_polynomial || form_ == Form::inverse_quadratic) ? 1.0 / r : r;
    min_ = std::min(min_, value);
    max_ = std::max(max_, value);
  };
  if (axisymmetric()) {
    for (int i = 0; i <= 2000; ++i) {
      const double mu = -1.0 + i / 1000.0;
      // raw() only sees Ω·axis here, so the scaled axis stands in for a direction.
      probe(axis_.vec() * mu);
    }
  }
  const int n_mu = 101;
  const int n_phi = 128;
  for (int i = 0; i < n_mu; ++i) {
    const double mu = -1.0 + 2.0 * i / (n_mu - 1);
    const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_phi;
      probe(Vec3{st * std::cos(phi), st * std::sin(phi), mu});
    }
  }
}

}  // namespace nct
