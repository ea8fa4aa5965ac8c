#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace nct {

/// Direction-free path-length law: Σ(s), optical depth τ(s) = ∫₀ˢ Σ, and the
/// survival exp(−τ). Serves as the s-profile of direction-modulated models
/// and as the law behind pdf-specified models.
class PathLaw {
 public:
  enum class Family { exponential, weibull, uniform, lomax, table };

  /// Σ = sigma.
  static PathLaw exponential(double sigma);
  /// τ = (s/lambda)^k, k >= 1.
  static PathLaw weibull(double k, double lambda);
  /// q uniform on [0, length]: Σ = 1/(length − s).
  static PathLaw uniform(double length);
  /// survival (1 + s/lambda)^−alpha; q has a power tail ∝ s^−(alpha+1).
  static PathLaw lomax(double alpha, double lambda);
  /// Piecewise-linear q on nodes s (s[0] = 0, increasing). The table mass is
  /// checked against 1 within 1e-6 and then renormalized; see
  /// `renormalization()`.
  static PathLaw table(std::vector<double> s, std::vector<double> q);

  Family family() const { return family_; }
  std::string name() const;

  double sigma(double s) const;
  double optical_depth(double s) const;
  double survival(double s) const;
  double pdf(double s) const;

  /// Smallest s with optical depth >= t. Closed form for the analytic
  /// families; table laws invert their piecewise-quadratic mass function.
  double inverse_optical_depth(double t) const;

  /// End of the support; +inf for unbounded laws.
  double support_end() const;
  /// Kinks of the integrands (table nodes), empty for analytic laws.
  const std::vector<double>& breakpoints() const;

  /// Factor applied to the supplied table (1 for analytic laws).
  double renormalization() const { return renorm_; }

  double param1() const { return p1_; }
  double param2() const { return p2_; }

 private:
  struct Table {
    std::vector<double> s;
    std::vector<double> q;
    std::vector<double> tail;  // mass on [s_i, end]
  };
  std::size_t table_index(double s) const;
  double table_tail(double s) const;

  Family family_ = Family::exponential;
  double p1_ = 1.0;
  double p2_ = 1.0;
  double renorm_ = 1.0;
  std::shared_ptr<const Table> table_;
};

}  // namespace nct
