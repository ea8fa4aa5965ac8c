#include "nct/cross_section.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

// pchip.hpp in Boost 1.74 calls isnan unqualified; math.h puts it in scope.
#include <math.h>
#include <boost/math/interpolators/pchip.hpp>

#include "nct/errors.hpp"

namespace nct {

namespace {
const double kFloorDepth = -std::log(kSurvivalFloor);
}

struct CrossSectionModel::TabulatedImpl {
  struct Node {
    double mu;
    std::vector<double> s;
    boost::math::interpolators::pchip<std::vector<double>> spline;
    double s_end;
    double tau_end;
    double sigma_end;

    double tau(double x) const { return x <= s_end ? spline(x) : tau_end + sigma_end * (x - s_end); }
    double sigma(double x) const { return x <= s_end ? std::max(0.0, spline.prime(x)) : sigma_end; }
  };
  Direction axis;
  std::vector<Node> nodes;
};

CrossSectionModel CrossSectionModel::constant(double sigma) {
  CrossSectionModel m;
  m.kind_ = Kind::constant;
  m.law_ = PathLaw::exponential(sigma);
  m.compute_s_max();
  return m;
}

CrossSectionModel CrossSectionModel::direction_modulated(PathLaw base, AngularModulation modulation) {
  CrossSectionModel m;
  m.kind_ = Kind::direction_modulated;
  m.law_ = std::move(base);
  m.modulation_ = std::move(modulation);
  m.compute_s_max();
  return m;
}

CrossSectionModel CrossSectionModel::from_pdf(PathLaw law) {
  CrossSectionModel m;
  m.kind_ = Kind::from_pdf;
  m.law_ = std::move(law);
  m.compute_s_max();
  return m;
}

CrossSectionModel CrossSectionModel::tabulated(DepthTable table) {
  if (table.nodes.empty()) throw InvalidModelError("tabulated model: no direction nodes");
  std::sort(table.nodes.begin(), table.nodes.end(),
            [](const DepthNode& a, const DepthNode& b) { return a.mu < b.mu; });
  auto impl = std::make_shared<TabulatedImpl>();
  impl->axis = table.axis;
  for (std::size_t k = 0; k < table.nodes.size(); ++k) {
    DepthNode& n = table.nodes[k];
    const std::string where = "tabulated model node " + std::to_string(k) + ": ";
    if (!(n.mu >= 0.0 && n.mu <= 1.0)) throw InvalidModelError(where + "mu must lie in [0, 1]");
    if (k > 0 && !(n.mu > table.nodes[k - 1].mu)) throw InvalidModelError(where + "duplicate mu");
    if (n.s.size() != n.tau.size()) throw InvalidModelError(where + "s and tau differ in length");
    if (n.s.size() < 4) throw InvalidModelError(where + "at least four s points required");
    if (n.s[0] != 0.0 || n.tau[0] != 0.0) throw InvalidModelError(where + "table must start at s = 0, tau = 0");
    for (std::size_t i = 1; i < n.s.size(); ++i) {
      if (!std::isfinite(n.s[i]) || !std::isfinite(n.tau[i])) throw InvalidModelError(where + "non-finite entry");
      if (!(n.s[i] > n.s[i - 1])) throw InvalidModelError(where + "s must increase strictly");
      if (n.tau[i] < n.tau[i - 1]) throw InvalidModelError(where + "optical depth must be nondecreasing");
    }
    const double s_end = n.s.back();
    const double tau_end = n.tau.back();
    const std::size_t last = n.s.size() - 1;
    const double sigma_end = (n.tau[last] - n.tau[last - 1]) / (n.s[last] - n.s[last - 1]);
    if (!(sigma_end > 0.0)) throw InvalidModelError(where + "cross section vanishes at the table end");
    std::vector<double> s_copy = n.s;
    std::vector<double> tau_copy = n.tau;
    impl->nodes.push_back(TabulatedImpl::Node{
        n.mu, n.s,
        boost::math::interpolators::pchip<std::vector<double>>(std::move(s_copy), std::move(tau_copy)),
        s_end, tau_end, sigma_end});
  }
  CrossSectionModel m;
  m.kind_ = Kind::tabulated;
  m.table_ = std::move(impl);
  m.compute_s_max();
  return m;
}

std::string CrossSectionModel::kind_name() const {
  switch (kind_) {
    case Kind::constant: return "constant";
    case Kind::direction_modulated: return "direction_modulated";
    case Kind::tabulated: return "tabulated";
    case Kind::from_pdf: return "from_pdf";
  }
  return "?";
}

void CrossSectionModel::table_weights(const Direction& d, std::size_t& lo, std::size_t& hi,
                                      double& w) const {
  const auto& nodes = table_->nodes;
  const double mu = std::abs(dot(d, table_->axis));
  if (mu <= nodes.front().mu) {
    lo = hi = 0;
    w = 0.0;
    return;
  }
  if (mu >= nodes.back().mu) {
    lo = hi = nodes.size() - 1;
    w = 0.0;
    return;
  }
  auto it = std::upper_bound(nodes.begin(), nodes.end(), mu,
                             [](double v, const TabulatedImpl::Node& n) { return v < n.mu; });
  hi = static_cast<std::size_t>(it - nodes.begin());
  lo = hi - 1;
  w = (mu - nodes[lo].mu) / (nodes[hi].mu - nodes[lo].mu);
}

double CrossSectionModel::sigma(const Direction& d, double s) const {
  if (kind_ == Kind::tabulated) {
    std::size_t lo, hi;
    double w;
    table_weights(d, lo, hi, w);
    const auto& n = table_->nodes;
    return (1.0 - w) * n[lo].sigma(s) + w * n[hi].sigma(s);
  }
  return modulation_value(d) * law_.sigma(s);
}

double CrossSectionModel::optical_depth(const Direction& d, double s) const {
  if (kind_ == Kind::tabulated) {
    std::size_t lo, hi;
    double w;
    table_weights(d, lo, hi, w);
    const auto& n = table_->nodes;
    return (1.0 - w) * n[lo].tau(s) + w * n[hi].tau(s);
  }
  return modulation_value(d) * law_.optical_depth(s);
}

double CrossSectionModel::survival(const Direction& d, double s) const {
  if (kind_ != Kind::tabulated && !modulation_) return law_.survival(s);
  return std::exp(-optical_depth(d, s));
}

double CrossSectionModel::pdf(const Direction& d, double s) const {
  if (kind_ != Kind::tabulated && !modulation_) return law_.pdf(s);
  const double f = survival(d, s);
  return f > 0.0 ? sigma(d, s) * f : 0.0;
}

std::optional<double> CrossSectionModel::closed_inverse(const Direction& d, double t) const {
  if (kind_ == Kind::tabulated) return std::nullopt;
  return law_.inverse_optical_depth(t / modulation_value(d));
}

double CrossSectionModel::support_end(const Direction&) const {
  if (kind_ == Kind::tabulated) return std::numeric_limits<double>::infinity();
  return law_.support_end();
}

double CrossSectionModel::s_max(const Direction& d) const {
  if (kind_ == Kind::tabulated) {
    std::size_t lo, hi;
    double w;
    table_weights(d, lo, hi, w);
    return std::max(table_->nodes[lo].s_end, table_->nodes[hi].s_end);
  }
  const double end = law_.support_end();
  if (std::isfinite(end)) return end;
  return law_.inverse_optical_depth(kFloorDepth / modulation_value(d));
}

void CrossSectionModel::compute_s_max() {
  if (kind_ == Kind::tabulated) {
    s_max_ = 0.0;
    for (const auto& n : table_->nodes) s_max_ = std::max(s_max_, n.s_end);
    return;
  }
  const double end = law_.support_end();
  if (std::isfinite(end)) {
    s_max_ = end;
    return;
  }
  const double m_min = modulation_ ? modulation_->min_value() : 1.0;
  s_max_ = law_.inverse_optical_depth(kFloorDepth / m_min);
}

std::vector<double> CrossSectionModel::breakpoints(const Direction& d) const {
  if (kind_ == Kind::tabulated) {
    std::size_t lo, hi;
    double w;
    table_weights(d, lo, hi, w);
    std::vector<double> out = table_->nodes[lo].s;
    if (hi != lo) {
      const auto& b = table_->nodes[hi].s;
      out.insert(out.end(), b.begin(), b.end());
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return out;
  }
  return law_.breakpoints();
}

bool CrossSectionModel::direction_independent() const {
  if (kind_ == Kind::tabulated) return table_->nodes.size() == 1;
  return !modulation_;
}

bool CrossSectionModel::axisymmetric() const {
  if (kind_ == Kind::tabulated) return true;
  return !modulation_ || modulation_->axisymmetric();
}

Direction CrossSectionModel::axis() const {
  if (kind_ == Kind::tabulated) return table_->axis;
  if (modulation_ && modulation_->axisymmetric()) return modulation_->axis();
  return Direction{0.0, 0.0, 1.0};
}

namespace {
Direction direction_at_polar(const Direction& axis, double mu) {
  // Any unit vector perpendicular to the axis completes the frame.
  const Vec3 a = axis.vec();
  const Vec3 helper = std::abs(a.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  const Vec3 e = cross(a, helper);
  const Vec3 perp = e * (1.0 / norm(e));
  const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
  return Direction::normalized(a * mu + perp * st);
}
}  // namespace

DepthTable tabulate_model(const CrossSectionModel& model, const Direction& axis,
                          const std::vector<double>& mu_nodes, int n_s) {
  if (n_s < 4) throw DomainError("tabulate_model: n_s must be >= 4");
  DepthTable table;
  table.axis = axis;
  for (double mu : mu_nodes) {
    const Direction d = direction_at_polar(axis, mu);
    const double end = model.s_max(d);
    DepthNode node;
    node.mu = mu;
    node.s.push_back(0.0);
    node.tau.push_back(0.0);
    const double s0 = end * 1e-6;
    for (int i = 0; i < n_s - 1; ++i) {
      const double s = s0 * std::pow(end / s0, static_cast<double>(i) / (n_s - 2));
      node.s.push_back(s);
      node.tau.push_back(model.optical_depth(d, s));
    }
    table.nodes.push_back(std::move(node));
  }
  return table;
}

}  // namespace nct
