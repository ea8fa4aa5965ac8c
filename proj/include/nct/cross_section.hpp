#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nct/angular_modulation.hpp"
#include "nct/path_law.hpp"
#include "nct/vec3.hpp"

namespace nct {

/// Optical-depth table for one polar node, μ = |Ω·axis| in [0, 1].
struct DepthNode {
  double mu = 0.0;
  std::vector<double> s;    // s[0] = 0, increasing, >= 4 entries
  std::vector<double> tau;  // tau[0] = 0, nondecreasing
};

struct DepthTable {
  Direction axis{0.0, 0.0, 1.0};
  std::vector<DepthNode> nodes;  // sorted by mu on construction
};

/// Survival level that defines the default truncation point s_max.
inline constexpr double kSurvivalFloor = 1e-12;

/// Σ_t(Ω, s) with its optical depth. Immutable; cheap to copy.
class CrossSectionModel {
 public:
  enum class Kind { constant, direction_modulated, tabulated, from_pdf };

  static CrossSectionModel constant(double sigma);
  static CrossSectionModel direction_modulated(PathLaw base, AngularModulation modulation);
  /// Table nodes are interpolated monotonically (PCHIP) in s and linearly in
  /// |μ|. Past the last node Σ_t is held at its end value.
  static CrossSectionModel tabulated(DepthTable table);
  static CrossSectionModel from_pdf(PathLaw law);

  Kind kind() const { return kind_; }
  std::string kind_name() const;

  double sigma(const Direction& d, double s) const;
  double optical_depth(const Direction& d, double s) const;
  double survival(const Direction& d, double s) const;
  double pdf(const Direction& d, double s) const;

  /// Closed-form s with optical_depth(d, s) = t, when the model has one.
  std::optional<double> closed_inverse(const Direction& d, double t) const;

  /// Largest distance at which a probe direction still has survival above
  /// kSurvivalFloor (or the support / table end).
  double s_max() const { return s_max_; }
  double s_max(const Direction& d) const;
  /// Sampling gives up past this distance.
  double s_limit() const { return 4.0 * s_max_; }
  double support_end(const Direction& d) const;
  std::vector<double> breakpoints(const Direction& d) const;

  bool direction_independent() const;
  /// True when Σ_t depends on Ω only through Ω·axis().
  bool axisymmetric() const;
  Direction axis() const;

  const PathLaw& law() const { return law_; }
  const AngularModulation* modulation() const { return modulation_ ? &*modulation_ : nullptr; }
  double modulation_value(const Direction& d) const { return modulation_ ? (*modulation_)(d) : 1.0; }

 private:
  struct TabulatedImpl;

  void compute_s_max();
  // Node bracket and linear weight for |Ω·axis|.
  void table_weights(const Direction& d, std::size_t& lo, std::size_t& hi, double& w) const;

  Kind kind_ = Kind::constant;
  PathLaw law_ = PathLaw::exponential(1.0);
  std::optional<AngularModulation> modulation_;
  std::shared_ptr<const TabulatedImpl> table_;
  double s_max_ = 0.0;
};

/// Samples an analytic model's optical depth on s = 0 plus a log-spaced grid
/// up to the floor-survival distance of each polar node.
DepthTable tabulate_model(const CrossSectionModel& model, const Direction& axis,
                          const std::vector<double>& mu_nodes, int n_s);

}  // namespace nct
