#include "nct/sphere_quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nct/errors.hpp"
#include "nct/quadrature_1d.hpp"

namespace nct {

namespace {
[[noreturn]] void non_finite(std::size_t k) {
  throw NumericError("angular integrand is not finite at node " + std::to_string(k));
}
}  // namespace

AngularQuadrature AngularQuadrature::product(int n_polar, int n_azimuthal) {
  std::vector<FieldError> errors;
  if (n_polar < 2 || n_polar % 2 != 0) {
    errors.push_back({"quadrature.n_polar", "must be an even integer >= 2"});
  }
  if (n_azimuthal < 4 || n_azimuthal % 4 != 0) {
    errors.push_back({"quadrature.n_azimuthal", "must be a multiple of 4 and >= 4"});
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));

  AngularQuadrature q;
  q.n_polar_ = n_polar;
  q.n_azimuthal_ = n_azimuthal;
  const GaussLegendreRule gl = gauss_legendre(n_polar);
  q.mu_ = gl.nodes;

  const int half = n_azimuthal / 2;
  std::vector<double> cphi(n_azimuthal);
  std::vector<double> sphi(n_azimuthal);
  for (int j = 0; j < half; ++j) {
    const double phi = (j + 0.5) * 2.0 * std::numbers::pi / n_azimuthal;
    cphi[j] = std::cos(phi);
    sphi[j] = std::sin(phi);
    cphi[j + half] = -cphi[j];
    sphi[j + half] = -sphi[j];
  }
  const double dphi = 2.0 * std::numbers::pi / n_azimuthal;
  q.nodes_.reserve(static_cast<std::size_t>(n_polar) * n_azimuthal);
  for (int i = 0; i < n_polar; ++i) {
    const double mu = gl.nodes[i];
    const double st = std::sqrt((1.0 - mu) * (1.0 + mu));
    for (int j = 0; j < n_azimuthal; ++j) {
      q.nodes_.push_back(Direction::normalized(Vec3{st * cphi[j], st * sphi[j], mu}));
      q.weights_.push_back(gl.weights[i] * dphi);
    }
  }
  // normalized() may round the two members of a pair differently; copy the
  // negation so pairs cancel bit for bit.
  for (std::size_t k = 0; k < q.nodes_.size(); ++k) {
    const std::size_t a = q.antipode(k);
    if (a > k) q.nodes_[a] = -q.nodes_[k];
  }
  return q;
}

std::size_t AngularQuadrature::antipode(std::size_t k) const {
  const std::size_t na = static_cast<std::size_t>(n_azimuthal_);
  const std::size_t i = k / na;
  const std::size_t j = k % na;
  return (static_cast<std::size_t>(n_polar_) - 1 - i) * na + (j + na / 2) % na;
}

double AngularQuadrature::integrate(const std::function<double(const Direction&)>& f) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const double v = f(nodes_[k]);
    if (!std::isfinite(v)) non_finite(k);
    acc += weights_[k] * v;
  }
  return acc;
}

Vec3 AngularQuadrature::integrate(const std::function<Vec3(const Direction&)>& f) const {
  Vec3 acc;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Vec3 v = f(nodes_[k]);
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) non_finite(k);
    acc += v * weights_[k];
  }
  return acc;
}

double AngularQuadrature::sum(std::span<const double> values) const {
  if (values.size() != nodes_.size()) throw DomainError("quadrature sum: size mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) non_finite(k);
    acc += weights_[k] * values[k];
  }
  return acc;
}

Vec3 AngularQuadrature::sum(std::span<const Vec3> values) const {
  if (values.size() != nodes_.size()) throw DomainError("quadrature sum: size mismatch");
  Vec3 acc;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Vec3& v = values[k];
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) non_finite(k);
    acc += v * weights_[k];
  }
  return acc;
}

}  // namespace nct
