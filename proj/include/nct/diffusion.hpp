#pragma once

#include <array>
#include <memory>
#include <vector>

#include "nct/cross_section.hpp"
#include "nct/grid.hpp"
#include "nct/path_stats.hpp"
#include "nct/phase_function.hpp"
#include "nct/sphere_quadrature.hpp"

namespace nct {

/// (M f)_k = Σ_j w_j P*(Ω_k·Ω_j) f_j on quadrature nodes; dense up to
/// kDenseLimit nodes, evaluated on the fly beyond.
class ScatteringOperator {
 public:
  static constexpr std::size_t kDenseLimit = 2048;

  ScatteringOperator(const ScatteringKernel& kernel, const AngularQuadrature& quad);

  std::vector<Vec3> apply(const std::vector<Vec3>& f) const;
  bool dense() const { return !matrix_.empty(); }

 private:
  const AngularQuadrature* quad_;
  ScatteringKernel kernel_;
  bool isotropic_;
  std::vector<double> matrix_;  // row-major, size n²
};

/// Ŝ(Ω_k) = −Σ_j w_j P*(Ω_k·Ω_j) Ω_j s_Ω(Ω_j).
std::vector<Vec3> compute_S_hat(const ScatteringOperator& op, const AngularQuadrature& quad,
                                const std::vector<double>& s1);
std::vector<Vec3> compute_S_hat(const CrossSectionModel& model, const ScatteringKernel& kernel,
                                const AngularQuadrature& quad);

struct TauField {
  std::vector<Vec3> values;       // per node
  std::vector<double> term_norms; // max-norm of τ_n, n = 0, 1, ...
  int terms = 0;
  double tail = 0.0;              // last term norm

  /// ‖τ_n‖/‖τ_{n−1}‖ for the last pair of nonzero terms (0 when undefined).
  double last_ratio() const;
};

/// τ ← Mτ + Ŝ from τ = Ŝ, kept odd at antipodal pairs, until the last term
/// is below tol. SeriesDivergenceError when max_terms is reached or the
/// term ratio stays at or above 1.
TauField solve_tau(const std::vector<Vec3>& s_hat, const ScatteringOperator& op,
                   const AngularQuadrature& quad, double tol = 1e-10, int max_terms = 10000);

/// Same series summed term by term: τ_{n+1} = M τ_n.
TauField solve_tau_explicit(const std::vector<Vec3>& s_hat, const ScatteringOperator& op,
                            const AngularQuadrature& quad, double tol = 1e-10, int max_terms = 10000);

struct DiffusionTensor {
  double xx = 0.0, yy = 0.0, zz = 0.0;
  double xy = 0.0, xz = 0.0, yz = 0.0;
  double s_mean = 0.0;
  double s2_mean = 0.0;
  double removal = 0.0;  // (1 − c)/⟨s⟩
  int tau_terms = 0;

  /// Symmetric matrix of the operator Σ D_ab ∂a∂b (off-diagonals halved).
  std::array<std::array<double, 3>, 3> matrix() const;
  bool positive_definite() const;
};

/// The six angular integrals with τ from the Neumann series.
DiffusionTensor diffusion_tensor_general(const CrossSectionModel& model, const ScatteringKernel& kernel,
                                         const AngularWeight& xi, const AngularQuadrature& quad,
                                         double tol = 1e-10, int max_terms = 10000);
/// τ = 0 form, valid for an isotropic kernel only.
DiffusionTensor diffusion_tensor_isotropic(const CrossSectionModel& model, const ScatteringKernel& kernel,
                                           const AngularWeight& xi, const AngularQuadrature& quad);
/// Dispatches to the isotropic form when the kernel allows it.
/// AnomalousDiffusionError when s²_Ω diverges.
DiffusionTensor diffusion_tensor(const CrossSectionModel& model, const ScatteringKernel& kernel,
                                 const AngularWeight& xi, const AngularQuadrature& quad,
                                 double tol = 1e-10, int max_terms = 10000);

enum class DiffusionBoundary { dirichlet_zero, periodic };

struct DiffusionOptions {
  DiffusionBoundary boundary = DiffusionBoundary::dirichlet_zero;
  double tol = 1e-10;
  int max_iter = 20000;
  int threads = 1;
};

struct DiffusionSolution {
  SpatialGrid grid;
  std::vector<double> phi0;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;
};

/// −Σ D_ab ∂a∂b Φ⁰ + removal Φ⁰ = Q with 3-point second differences and
/// 4-point cross differences. Dirichlet puts Φ⁰ = 0 one cell beyond the
/// outer cell centres. Jacobi-preconditioned conjugate gradients.
DiffusionSolution solve_diffusion(const DiffusionTensor& d, const std::vector<double>& source,
                                  const SpatialGrid& grid, const DiffusionOptions& opt = {});

/// The discrete operator applied to a field (for symmetry checks).
std::vector<double> apply_diffusion_operator(const DiffusionTensor& d, const SpatialGrid& grid,
                                             DiffusionBoundary boundary, const std::vector<double>& phi);

/// ψ_c = Φ⁰ s_Ω(Ω)/(4π⟨s⟩).
double leading_order_angular_flux(double phi0, double s_omega, double s_mean);
double leading_order_angular_flux(double phi0, const CrossSectionModel& model, const Direction& d,
                                  double s_mean);

}  // namespace nct
