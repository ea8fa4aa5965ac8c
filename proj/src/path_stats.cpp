#include "nct/path_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nct/errors.hpp"

namespace nct {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const QuadOptions kMomentOptions{1e-15, 1e-13, 4000};
const QuadOptions kCdfOptions{1e-15, 1e-14, 4000};

void require_nonnegative(double s) {
  if (!(s >= 0.0)) throw DomainError("path length must be >= 0");
}

double checked(const QuadResult& r, const char* what) {
  if (!r.converged && r.error > 1e-8 * std::max(std::abs(r.value), 1e-300)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << what << ": quadrature did not converge (error estimate " << r.error << ")";
    throw NumericError(msg.str());
  }
  return r.value;
}

/// ∫₀^∞ g over a law whose survival falls below the floor at s0. Past s0 the
/// integral is continued octave by octave; an octave that does not shrink
/// geometrically means the moment diverges.
double integrate_half_line(const std::function<double(double)>& g, double s0, double end,
                           std::vector<double> breaks, const char* what) {
  if (std::isfinite(end)) {
    return checked(integrate_adaptive(g, 0.0, end, kMomentOptions, breaks), what);
  }
  for (int k = 1; k <= 30; ++k) breaks.push_back(std::ldexp(s0, -k));
  const double head = checked(integrate_adaptive(g, 0.0, s0, kMomentOptions, breaks), what);
  double total = head;
  double lo = s0;
  double prev = 0.0;
  for (int octave = 0; octave < 200; ++octave) {
    const double inc = checked(integrate_adaptive(g, lo, 2.0 * lo, kMomentOptions), what);
    total += inc;
    lo *= 2.0;
    if (std::abs(inc) <= 1e-16 * std::abs(total)) return total;
    if (octave >= 1) {
      const double ratio = inc / prev;
      if (!(ratio < 0.9)) {
        std::ostringstream msg;
        msg.precision(6);
        msg << what << " diverges: integrand does not decay past s = " << lo / 4.0
            << " (octave ratio " << ratio << ")";
        throw DivergentMomentError(msg.str());
      }
      if (std::abs(inc) <= 1e-14 * std::abs(total)) {
        return total + inc * ratio / (1.0 - ratio);
      }
    }
    prev = inc;
  }
  throw DivergentMomentError(std::string(what) + ": tail continuation did not terminate");
}

std::vector<double> model_breaks(const CrossSectionModel& model, const Direction& d) {
  std::vector<double> b = model.breakpoints(d);
  const double end = model.support_end(d);
  if (std::isfinite(end)) b.push_back(end);
  return b;
}

}  // namespace

double survival_probability(const CrossSectionModel& model, const Direction& d, double s) {
  require_nonnegative(s);
  return model.survival(d, s);
}

double free_path_pdf(const CrossSectionModel& model, const Direction& d, double s) {
  require_nonnegative(s);
  return model.pdf(d, s);
}

FreePathDistribution::FreePathDistribution(Pdf pdf, Breakpoints breakpoints)
    : pdf_(std::move(pdf)), breakpoints_(std::move(breakpoints)) {}

FreePathDistribution FreePathDistribution::from_model(const CrossSectionModel& model) {
  return FreePathDistribution(
      [model](const Direction& d, double s) { return model.pdf(d, s); },
      [model](const Direction& d) { return model_breaks(model, d); });
}

double FreePathDistribution::pdf(const Direction& d, double s) const {
  require_nonnegative(s);
  return pdf_(d, s);
}

double FreePathDistribution::cdf(const Direction& d, double s) const {
  require_nonnegative(s);
  if (s == 0.0) return 0.0;
  std::vector<double> breaks;
  if (breakpoints_) breaks = breakpoints_(d);
  const auto r = integrate_adaptive([&](double x) { return pdf_(d, x); }, 0.0, s, kCdfOptions, breaks);
  return std::clamp(checked(r, "cdf"), 0.0, 1.0);
}

double sigma_from_pdf(const FreePathDistribution& q, const Direction& d, double s) {
  const double c = q.cdf(d, s);
  if (c >= 1.0 - 1e-14) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "cross section undefined at s = " << s << ": cdf = " << c << " leaves no surviving mass";
    throw SingularTailError(msg.str());
  }
  return q.pdf(d, s) / (1.0 - c);
}

double mean_free_path(const CrossSectionModel& model, const Direction& d) {
  return integrate_half_line([&](double s) { return model.survival(d, s); }, model.s_max(d),
                             model.support_end(d), model_breaks(model, d), "mean free path");
}

double raw_moment(const CrossSectionModel& model, const Direction& d, int m) {
  if (m != 1 && m != 2) throw DomainError("raw_moment: m must be 1 or 2");
  if (m == 1) return mean_free_path(model, d);
  return integrate_half_line([&](double s) { return s * s * model.pdf(d, s); }, model.s_max(d),
                             model.support_end(d), model_breaks(model, d),
                             "mean-squared free path");
}

double pdf_mass(const CrossSectionModel& model, const Direction& d) {
  return integrate_half_line([&](double s) { return model.pdf(d, s); }, model.s_max(d),
                             model.support_end(d), model_breaks(model, d), "pdf mass");
}

double equilibrium_spectrum(const CrossSectionModel& model, const Direction& d, double s) {
  require_nonnegative(s);
  double s1 = 0.0;
  try {
    s1 = mean_free_path(model, d);
  } catch (const DivergentMomentError& e) {
    throw DivergentMomentError(std::string("equilibrium spectrum is not normalizable: ") + e.what());
  }
  return model.survival(d, s) / s1;
}

AngularWeight AngularWeight::uniform() { return AngularWeight{}; }

AngularWeight AngularWeight::polar(Direction axis, std::vector<double> coeffs) {
  if (coeffs.empty()) throw InvalidModelError("angular weight: empty coefficient list");
  double integral = 0.0;  // ∫₋₁¹ p(μ) dμ
  for (std::size_t k = 0; k < coeffs.size(); k += 2) integral += 2.0 * coeffs[k] / (k + 1.0);
  for (int i = 0; i <= 2000; ++i) {
    const double mu = -1.0 + i / 1000.0;
    double p = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) p = p * mu + coeffs[k];
    if (p < 0.0) throw InvalidModelError("angular weight: density is negative");
  }
  if (!(integral > 0.0)) throw InvalidModelError("angular weight: zero total weight");
  AngularWeight w;
  w.axis_ = axis;
  w.coeffs_ = std::move(coeffs);
  w.scale_ = 1.0 / (2.0 * std::numbers::pi * integral);
  return w;
}

double AngularWeight::operator()(const Direction& d) const {
  if (coeffs_.empty()) return 1.0 / (4.0 * std::numbers::pi);
  const double mu = dot(axis_, d);
  double p = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) p = p * mu + coeffs_[k];
  return scale_ * p;
}

DirectionalMoments directional_moments(const CrossSectionModel& model, const AngularWeight& xi,
                                       const AngularQuadrature& quad, bool second) {
  const std::size_t n = quad.size();
  DirectionalMoments out;
  out.s1.assign(n, 0.0);
  if (second) out.s2.assign(n, 0.0);

  // Reuse work across nodes that see the same Σ_t: all of them for a
  // direction-free model, whole polar rings for a z-symmetric one.
  const bool uniform = model.direction_independent();
  const bool ring = !uniform && model.axisymmetric() && std::abs(model.axis().z()) == 1.0;
  std::vector<double> ring_s1(quad.n_polar(), -1.0);
  std::vector<double> ring_s2(quad.n_polar(), -1.0);
  double u1 = -1.0;
  double u2 = -1.0;

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t a = quad.antipode(k);
    if (a < k) {
      out.s1[k] = out.s1[a];
      if (second) out.s2[k] = out.s2[a];
      continue;
    }
    const Direction& d = quad.node(k);
    double v1;
    double v2 = 0.0;
    if (uniform && u1 >= 0.0) {
      v1 = u1;
      v2 = u2;
    } else if (ring && ring_s1[quad.polar_index(k)] >= 0.0) {
      v1 = ring_s1[quad.polar_index(k)];
      v2 = ring_s2[quad.polar_index(k)];
    } else {
      v1 = mean_free_path(model, d);
      if (second) v2 = raw_moment(model, d, 2);
      if (uniform) {
        u1 = v1;
        u2 = v2;
      }
      if (ring) {
        ring_s1[quad.polar_index(k)] = v1;
        ring_s2[quad.polar_index(k)] = v2;
      }
    }
    out.s1[k] = v1;
    if (second) out.s2[k] = v2;
  }
  std::vector<double> weighted(n);
  for (std::size_t k = 0; k < n; ++k) weighted[k] = xi(quad.node(k)) * out.s1[k];
  out.s_mean = quad.sum(weighted);
  if (second) {
    for (std::size_t k = 0; k < n; ++k) weighted[k] = xi(quad.node(k)) * out.s2[k];
    out.s2_mean = quad.sum(weighted);
  }
  return out;
}

double ensemble_mean(const CrossSectionModel& model, const AngularWeight& xi,
                     const AngularQuadrature& quad, int m) {
  if (m != 1 && m != 2) throw DomainError("ensemble_mean: m must be 1 or 2");
  const DirectionalMoments mom = directional_moments(model, xi, quad, m == 2);
  return m == 1 ? mom.s_mean : mom.s2_mean;
}

double invert_optical_depth(const CrossSectionModel& model, const Direction& d, double t) {
  if (!(t >= 0.0)) throw DomainError("optical depth target must be >= 0");
  if (t == 0.0) return 0.0;
  const double limit = model.s_limit();
  double lo = 0.0;
  double hi = std::min(model.s_max(d), limit);
  while (model.optical_depth(d, hi) < t) {
    lo = hi;
    if (hi >= limit) {
      throw TailOverflowError("optical depth target lies beyond the sampling limit");
    }
    hi = std::min(2.0 * hi, limit);
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = model.optical_depth(d, s) - t;
    if (std::abs(g) <= 1e-12) return s;
    if (g > 0.0) hi = s;
    else lo = s;
    const double sig = model.sigma(d, s);
    double next = (sig > 0.0 && std::isfinite(sig)) ? s - g / sig : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return next;
    s = next;
  }
  return s;
}

double sample_free_path(const CrossSectionModel& model, const Direction& d, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("sample_free_path: u must lie in (0, 1)");
  const double t = -std::log1p(-u);
  if (auto s = model.closed_inverse(d, t)) {
    if (*s > model.s_limit()) {
      throw TailOverflowError("sampled optical depth lies beyond the sampling limit");
    }
    return *s;
  }
  return invert_optical_depth(model, d, t);
}

}  // namespace nct
