#include "nct/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nct/errors.hpp"
#include "nct/parallel.hpp"

namespace nct {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

double max_norm(const std::vector<Vec3>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max({m, std::abs(x.x), std::abs(x.y), std::abs(x.z)});
  return m;
}

void make_odd(std::vector<Vec3>& v, const AngularQuadrature& quad) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::size_t a = quad.antipode(k);
    if (a <= k) continue;
    const Vec3 odd = (v[k] - v[a]) * 0.5;
    v[k] = odd;
    v[a] = -odd;
  }
}

[[noreturn]] void diverged(const char* why, const TauField& t) {
  std::ostringstream msg;
  msg.precision(6);
  msg << "Neumann series for tau " << why << " after " << t.terms << " terms (last term " << t.tail
      << ", ratio " << t.last_ratio() << ")";
  throw SeriesDivergenceError(msg.str());
}

/// Term-ratio guard: a run of 20 terms that do not shrink means c·|μ̄₀|-like
/// contraction is absent.
bool ratio_stalled(const TauField& t) {
  constexpr int kRun = 20;
  const int n = static_cast<int>(t.term_norms.size());
  if (n <= kRun) return false;
  for (int i = n - kRun; i < n; ++i) {
    if (!(t.term_norms[i] >= t.term_norms[i - 1]) || t.term_norms[i] == 0.0) return false;
  }
  return true;
}

}  // namespace

ScatteringOperator::ScatteringOperator(const ScatteringKernel& kernel, const AngularQuadrature& quad)
    : quad_(&quad), kernel_(kernel), isotropic_(kernel.is_isotropic()) {
  const std::size_t n = quad.size();
  if (isotropic_ || n > kDenseLimit) return;
  matrix_.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k; j < n; ++j) {
      const double p = kernel_(std::clamp(dot(quad.node(k), quad.node(j)), -1.0, 1.0));
      matrix_[k * n + j] = quad.weight(j) * p;
      matrix_[j * n + k] = quad.weight(k) * p;
    }
  }
}

std::vector<Vec3> ScatteringOperator::apply(const std::vector<Vec3>& f) const {
  const std::size_t n = quad_->size();
  if (f.size() != n) throw DomainError("scattering operator: field size mismatch");
  std::vector<Vec3> out(n);
  if (isotropic_) {
    const Vec3 mean = quad_->sum(f) * (1.0 / kFourPi);
    std::fill(out.begin(), out.end(), mean);
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) {
    Vec3 acc;
    if (!matrix_.empty()) {
      const double* row = &matrix_[k * n];
      for (std::size_t j = 0; j < n; ++j) acc += f[j] * row[j];
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        const double p = kernel_(std::clamp(dot(quad_->node(k), quad_->node(j)), -1.0, 1.0));
        acc += f[j] * (quad_->weight(j) * p);
      }
    }
    out[k] = acc;
  }
  return out;
}

std::vector<Vec3> compute_S_hat(const ScatteringOperator& op, const AngularQuadrature& quad,
                                const std::vector<double>& s1) {
  std::vector<Vec3> f(quad.size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = quad.node(j).vec() * s1[j];
  std::vector<Vec3> s = op.apply(f);
  for (auto& v : s) v = -v;
  make_odd(s, quad);
  return s;
}

std::vector<Vec3> compute_S_hat(const CrossSectionModel& model, const ScatteringKernel& kernel,
                                const AngularQuadrature& quad) {
  const DirectionalMoments m = directional_moments(model, AngularWeight::uniform(), quad, false);
  return compute_S_hat(ScatteringOperator(kernel, quad), quad, m.s1);
}

double TauField::last_ratio() const {
  for (std::size_t i = term_norms.size(); i-- > 1;) {
    if (term_norms[i - 1] > 0.0 && term_norms[i] > 0.0) return term_norms[i] / term_norms[i - 1];
  }
  return 0.0;
}

TauField solve_tau(const std::vector<Vec3>& s_hat, const ScatteringOperator& op,
                   const AngularQuadrature& quad, double tol, int max_terms) {
  TauField t;
  t.values = s_hat;
  make_odd(t.values, quad);
  t.tail = max_norm(t.values);
  t.term_norms.push_back(t.tail);
  t.terms = 1;
  while (t.tail >= tol) {
    if (t.terms >= max_terms) diverged("did not converge", t);
    if (ratio_stalled(t)) diverged("does not contract", t);
    std::vector<Vec3> next = op.apply(t.values);
    for (std::size_t k = 0; k < next.size(); ++k) next[k] += s_hat[k];
    make_odd(next, quad);
    double diff = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k) {
      const Vec3 d = next[k] - t.values[k];
      diff = std::max({diff, std::abs(d.x), std::abs(d.y), std::abs(d.z)});
    }
    t.values = std::move(next);
    t.tail = diff;
    t.term_norms.push_back(diff);
    ++t.terms;
    if (!std::isfinite(diff)) diverged("overflowed", t);
  }
  return t;
}

TauField solve_tau_explicit(const std::vector<Vec3>& s_hat, const ScatteringOperator& op,
                            const AngularQuadrature& quad, double tol, int max_terms) {
  TauField t;
  std::vector<Vec3> term = s_hat;
  make_odd(term, quad);
  t.values = term;
  t.tail = max_norm(term);
  t.term_norms.push_back(t.tail);
  t.terms = 1;
  while (t.tail >= tol) {
    if (t.terms >= max_terms) diverged("did not converge", t);
    if (ratio_stalled(t)) diverged("does not contract", t);
    term = op.apply(term);
    make_odd(term, quad);
    for (std::size_t k = 0; k < term.size(); ++k) t.values[k] += term[k];
    t.tail = max_norm(term);
    t.term_norms.push_back(t.tail);
    ++t.terms;
  }
  return t;
}

std::array<std::array<double, 3>, 3> DiffusionTensor::matrix() const {
  return {{{xx, 0.5 * xy, 0.5 * xz}, {0.5 * xy, yy, 0.5 * yz}, {0.5 * xz, 0.5 * yz, zz}}};
}

bool DiffusionTensor::positive_definite() const {
  const auto a = matrix();
  // Cholesky on the 3×3 matrix.
  const double l00 = a[0][0];
  if (!(l00 > 0.0)) return false;
  const double r00 = std::sqrt(l00);
  const double r10 = a[1][0] / r00;
  const double r20 = a[2][0] / r00;
  const double l11 = a[1][1] - r10 * r10;
  if (!(l11 > 0.0)) return false;
  const double r11 = std::sqrt(l11);
  const double r21 = (a[2][1] - r20 * r10) / r11;
  const double l22 = a[2][2] - r20 * r20 - r21 * r21;
  return l22 > 0.0;
}

namespace {

DirectionalMoments moments_for_diffusion(const CrossSectionModel& model, const AngularWeight& xi,
                                         const AngularQuadrature& quad) {
  try {
    return directional_moments(model, xi, quad, true);
  } catch (const AnomalousDiffusionError&) {
    throw;
  } catch (const DivergentMomentError& e) {
    throw AnomalousDiffusionError(std::string("anomalous diffusion, no diffusion limit: ") + e.what());
  }
}

DiffusionTensor assemble(const AngularQuadrature& quad, const DirectionalMoments& m,
                         const std::vector<Vec3>* tau, double c) {
  DiffusionTensor d;
  d.s_mean = m.s_mean;
  d.s2_mean = m.s2_mean;
  d.removal = (1.0 - c) / m.s_mean;
  double xx = 0.0, yy = 0.0, zz = 0.0, xy = 0.0, xz = 0.0, yz = 0.0;
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const Vec3& o = quad.node(k).vec();
    const double w = quad.weight(k);
    const double s1 = m.s1[k];
    const double s2 = m.s2[k];
    const Vec3 t = tau ? (*tau)[k] : Vec3{};
    xx += w * (0.5 * s2 * o.x - s1 * t.x) * o.x;
    yy += w * (0.5 * s2 * o.y - s1 * t.y) * o.y;
    zz += w * (0.5 * s2 * o.z - s1 * t.z) * o.z;
    xy += w * (s2 * o.x * o.y - s1 * (t.x * o.y + t.y * o.x));
    xz += w * (s2 * o.x * o.z - s1 * (t.x * o.z + t.z * o.x));
    yz += w * (s2 * o.y * o.z - s1 * (t.y * o.z + t.z * o.y));
  }
  const double scale = 1.0 / (kFourPi * m.s_mean);
  d.xx = xx * scale;
  d.yy = yy * scale;
  d.zz = zz * scale;
  d.xy = xy * scale;
  d.xz = xz * scale;
  d.yz = yz * scale;
  for (double v : {d.xx, d.yy, d.zz, d.xy, d.xz, d.yz}) {
    if (!std::isfinite(v)) throw NumericError("diffusion tensor has a non-finite entry");
  }
  return d;
}

}  // namespace

DiffusionTensor diffusion_tensor_general(const CrossSectionModel& model, const ScatteringKernel& kernel,
                                         const AngularWeight& xi, const AngularQuadrature& quad,
                                         double tol, int max_terms) {
  const DirectionalMoments m = moments_for_diffusion(model, xi, quad);
  const ScatteringOperator op(kernel, quad);
  const std::vector<Vec3> s_hat = compute_S_hat(op, quad, m.s1);
  const TauField tau = solve_tau(s_hat, op, quad, tol, max_terms);
  DiffusionTensor d = assemble(quad, m, &tau.values, kernel.c());
  d.tau_terms = tau.terms;
  return d;
}

DiffusionTensor diffusion_tensor_isotropic(const CrossSectionModel& model, const ScatteringKernel& kernel,
                                           const AngularWeight& xi, const AngularQuadrature& quad) {
  if (!kernel.is_isotropic()) {
    throw DomainError("isotropic diffusion-tensor form requires an isotropic scattering kernel");
  }
  const DirectionalMoments m = moments_for_diffusion(model, xi, quad);
  return assemble(quad, m, nullptr, kernel.c());
}

DiffusionTensor diffusion_tensor(const CrossSectionModel& model, const ScatteringKernel& kernel,
                                 const AngularWeight& xi, const AngularQuadrature& quad, double tol,
                                 int max_terms) {
  if (kernel.is_isotropic()) return diffusion_tensor_isotropic(model, kernel, xi, quad);
  return diffusion_tensor_general(model, kernel, xi, quad, tol, max_terms);
}

namespace {

struct Stencil {
  double cx, cy, cz;     // D_aa / h_a²
  double cxy, cxz, cyz;  // D_ab / (4 h_a h_b)
  double removal;
  double diag() const { return 2.0 * (cx + cy + cz) + removal; }
};

Stencil make_stencil(const DiffusionTensor& d, const SpatialGrid& g) {
  const double hx = g.h(0), hy = g.h(1), hz = g.h(2);
  return {d.xx / (hx * hx),         d.yy / (hy * hy),         d.zz / (hz * hz), d.xy / (4.0 * hx * hy),
          d.xz / (4.0 * hx * hz), d.yz / (4.0 * hy * hz), d.removal};
}

void apply_operator(const Stencil& st, const SpatialGrid& g, DiffusionBoundary bc,
                    const std::vector<double>& phi, std::vector<double>& out, int threads) {
  const int nx = g.n(0), ny = g.n(1), nz = g.n(2);
  const bool periodic = bc == DiffusionBoundary::periodic;
  auto at = [&](int i, int j, int k) -> double {
    if (periodic) {
      i = (i + nx) % nx;
      j = (j + ny) % ny;
      k = (k + nz) % nz;
    } else if (i < 0 || i >= nx || j < 0 || j >= ny || k < 0 || k >= nz) {
      return 0.0;
    }
    return phi[g.index(i, j, k)];
  };
  parallel_for(static_cast<std::size_t>(nz), threads, [&](std::size_t kz) {
    const int k = static_cast<int>(kz);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const double c = phi[g.index(i, j, k)];
        double lap = st.cx * (at(i + 1, j, k) - 2.0 * c + at(i - 1, j, k)) +
                     st.cy * (at(i, j + 1, k) - 2.0 * c + at(i, j - 1, k)) +
                     st.cz * (at(i, j, k + 1) - 2.0 * c + at(i, j, k - 1));
        if (st.cxy != 0.0) {
          lap += st.cxy * (at(i + 1, j + 1, k) - at(i + 1, j - 1, k) - at(i - 1, j + 1, k) +
                           at(i - 1, j - 1, k));
        }
        if (st.cxz != 0.0) {
          lap += st.cxz * (at(i + 1, j, k + 1) - at(i + 1, j, k - 1) - at(i - 1, j, k + 1) +
                           at(i - 1, j, k - 1));
        }
        if (st.cyz != 0.0) {
          lap += st.cyz * (at(i, j + 1, k + 1) - at(i, j + 1, k - 1) - at(i, j - 1, k + 1) +
                           at(i, j - 1, k - 1));
        }
        out[g.index(i, j, k)] = -lap + st.removal * c;
      }
    }
  });
}

double dot_product(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

std::vector<double> apply_diffusion_operator(const DiffusionTensor& d, const SpatialGrid& grid,
                                             DiffusionBoundary boundary, const std::vector<double>& phi) {
  if (phi.size() != grid.size()) throw DomainError("diffusion operator: field size mismatch");
  std::vector<double> out(phi.size());
  apply_operator(make_stencil(d, grid), grid, boundary, phi, out, 1);
  return out;
}

DiffusionSolution solve_diffusion(const DiffusionTensor& d, const std::vector<double>& source,
                                  const SpatialGrid& grid, const DiffusionOptions& opt) {
  if (source.size() != grid.size()) throw DomainError("solve_diffusion: source size mismatch");
  if (!(d.xx > 0.0 && d.yy > 0.0 && d.zz > 0.0)) {
    throw NotPositiveDefiniteError("diffusion tensor has a non-positive diagonal entry");
  }
  if (!d.positive_definite()) throw NotPositiveDefiniteError("diffusion tensor is not positive definite");
  if (!(d.removal >= 0.0)) throw DomainError("removal coefficient must be >= 0");
  if (opt.boundary == DiffusionBoundary::periodic && !(d.removal > 0.0)) {
    throw DomainError("periodic diffusion problem needs a positive removal coefficient");
  }

  const Stencil st = make_stencil(d, grid);
  const double inv_diag = 1.0 / st.diag();
  const std::size_t n = grid.size();
  DiffusionSolution sol;
  sol.grid = grid;
  sol.phi0.assign(n, 0.0);

  const double bnorm = std::sqrt(dot_product(source, source));
  if (bnorm == 0.0) return sol;

  std::vector<double> r = source;
  std::vector<double> z(n), p(n), ap(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] * inv_diag;
  p = z;
  double rz = dot_product(r, z);
  double best = 1.0;
  int since_best = 0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    apply_operator(st, grid, opt.boundary, p, ap, opt.threads);
    const double pap = dot_product(p, ap);
    if (!(pap > 0.0)) {
      throw SolverError("conjugate gradients lost positive curvature; discrete operator not SPD",
                        sol.residual_history);
    }
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      sol.phi0[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    const double rel = std::sqrt(dot_product(r, r)) / bnorm;
    sol.residual_history.push_back(rel);
    sol.residual = rel;
    sol.iterations = it;
    if (rel < opt.tol) return sol;
    if (rel < best * 0.999) {
      best = rel;
      since_best = 0;
    } else if (++since_best > 2000) {
      throw SolverError("conjugate gradients stagnated", sol.residual_history);
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] * inv_diag;
    const double rz_new = dot_product(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError("conjugate gradients hit the iteration limit", sol.residual_history);
}

double leading_order_angular_flux(double phi0, double s_omega, double s_mean) {
  return phi0 * s_omega / (kFourPi * s_mean);
}

double leading_order_angular_flux(double phi0, const CrossSectionModel& model, const Direction& d,
                                  double s_mean) {
  return leading_order_angular_flux(phi0, mean_free_path(model, d), s_mean);
}

}  // namespace nct
