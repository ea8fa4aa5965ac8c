#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nct/vec3.hpp"

namespace nct {

/// Product rule on the unit sphere: Gauss-Legendre in μ = Ω_z times an
/// offset trapezoid in azimuth. Node k = i * n_azimuthal + j for polar
/// index i and azimuthal index j; every node has its exact negative in the set.
class AngularQuadrature {
 public:
  static constexpr int kDefaultPolar = 32;
  static constexpr int kDefaultAzimuthal = 64;

  /// n_polar >= 2 even, n_azimuthal >= 4 and a multiple of 4 (ConfigError otherwise).
  static AngularQuadrature product(int n_polar = kDefaultPolar, int n_azimuthal = kDefaultAzimuthal);

  std::size_t size() const { return nodes_.size(); }
  int n_polar() const { return n_polar_; }
  int n_azimuthal() const { return n_azimuthal_; }
  const std::vector<Direction>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const Direction& node(std::size_t k) const { return nodes_[k]; }
  double weight(std::size_t k) const { return weights_[k]; }
  std::size_t antipode(std::size_t k) const;
  std::size_t polar_index(std::size_t k) const { return k / static_cast<std::size_t>(n_azimuthal_); }
  /// μ value of polar ring i.
  double polar_mu(std::size_t i) const { return mu_[i]; }

  double integrate(const std::function<double(const Direction&)>& f) const;
  Vec3 integrate(const std::function<Vec3(const Direction&)>& f) const;
  /// Σ w_k values[k]; values must be finite.
  double sum(std::span<const double> values) const;
  Vec3 sum(std::span<const Vec3> values) const;

 private:
  int n_polar_ = 0;
  int n_azimuthal_ = 0;
  std::vector<double> mu_;
  std::vector<Direction> nodes_;
  std::vector<double> weights_;
};

}  // namespace nct
