#pragma once

#include <string>
#include <vector>

#include "nct/config.hpp"

namespace nct {

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ReduceReport {
  double sigma = 0.0;
  double c = 0.0;
  double mean_cosine = 0.0;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

/// Verifies that a constant-σ document reproduces classical transport:
///   q_exponential          q = σ e^{−σs} and Σ recovered from q, all directions
///   mean_free_path         ⟨s⟩ = 1/σ
///   mean_square_free_path  ⟨s²⟩ = 2/σ²
///   kernel_form            integral kernel = cell average of σ e^{−σr}/(4πr²), r > 2h
///   collision_flux         F̂ = σ φ_c per cell
///   classical_integral     φ_c from the classical scalar-flux equation
///   diffusion_coefficient  D = 1/(3σ(1 − c μ̄₀)) on the diagonal, zero off it
///   removal                (1 − c)/⟨s⟩ = σ(1 − c)
/// Deviations are relative except for the off-diagonal tensor entries.
/// ConfigError at model.kind for any other kind of model; c must be below 1.
ReduceReport reduce_check(const RunDocument& doc, int threads = 1);

/// The built-in document: σ = 1, c = 0.5, μ̄₀ = 0.3.
RunDocument default_reduce_document();

}  // namespace nct
