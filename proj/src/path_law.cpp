#include "nct/path_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nct/errors.hpp"

namespace nct {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}
}  // namespace

PathLaw PathLaw::exponential(double sigma) {
  require_positive(sigma, "exponential sigma");
  PathLaw l;
  l.family_ = Family::exponential;
  l.p1_ = sigma;
  return l;
}

PathLaw PathLaw::weibull(double k, double lambda) {
  if (!(k >= 1.0) || !std::isfinite(k)) throw DomainError("weibull shape k must be >= 1");
  require_positive(lambda, "weibull scale");
  PathLaw l;
  l.family_ = Family::weibull;
  l.p1_ = k;
  l.p2_ = lambda;
  return l;
}

PathLaw PathLaw::uniform(double length) {
  require_positive(length, "uniform length");
  PathLaw l;
  l.family_ = Family::uniform;
  l.p1_ = length;
  return l;
}

PathLaw PathLaw::lomax(double alpha, double lambda) {
  require_positive(alpha, "lomax alpha");
  require_positive(lambda, "lomax scale");
  PathLaw l;
  l.family_ = Family::lomax;
  l.p1_ = alpha;
  l.p2_ = lambda;
  return l;
}

PathLaw PathLaw::table(std::vector<double> s, std::vector<double> q) {
  if (s.size() != q.size()) throw InvalidModelError("pdf table: s and q differ in length");
  if (s.size() < 2) throw InvalidModelError("pdf table: at least two nodes required");
  if (s.front() != 0.0) throw InvalidModelError("pdf table: first node must be s = 0");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i]) || !std::isfinite(q[i])) {
      throw InvalidModelError("pdf table: non-finite entry at row " + std::to_string(i));
    }
    if (q[i] < 0.0) throw InvalidModelError("pdf table: negative q at row " + std::to_string(i));
    if (i > 0 && !(s[i] > s[i - 1])) {
      throw InvalidModelError("pdf table: s must increase strictly (row " + std::to_string(i) + ")");
    }
  }
  auto t = std::make_shared<Table>();
  const std::size_t n = s.size();
  t->tail.assign(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    t->tail[i] = t->tail[i + 1] + 0.5 * (s[i + 1] - s[i]) * (q[i] + q[i + 1]);
  }
  const double mass = t->tail[0];
  if (std::abs(mass - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "pdf table: integral of q is " << mass << ", not 1 within 1e-6";
    throw InvalidModelError(msg.str());
  }
  for (double& v : q) v /= mass;
  for (double& v : t->tail) v /= mass;
  t->s = std::move(s);
  t->q = std::move(q);
  PathLaw l;
  l.family_ = Family::table;
  l.renorm_ = 1.0 / mass;
  l.table_ = std::move(t);
  return l;
}

std::string PathLaw::name() const {
  switch (family_) {
    case Family::exponential: return "exponential";
    case Family::weibull: return "weibull";
    case Family::uniform: return "uniform";
    case Family::lomax: return "lomax";
    case Family::table: return "table";
  }
  return "?";
}

std::size_t PathLaw::table_index(double s) const {
  const auto& xs = table_->s;
  auto it = std::upper_bound(xs.begin(), xs.end(), s);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  return i == 0 ? 0 : std::min(i - 1, xs.size() - 2);
}

double PathLaw::table_tail(double s) const {
  const auto& t = *table_;
  if (s >= t.s.back()) return 0.0;
  const std::size_t i = table_index(s);
  const double h = t.s[i + 1] - t.s[i];
  const double x = s - t.s[i];
  const double qs = t.q[i] + (t.q[i + 1] - t.q[i]) * (x / h);
  return t.tail[i + 1] + 0.5 * (h - x) * (qs + t.q[i + 1]);
}

double PathLaw::sigma(double s) const {
  switch (family_) {
    case Family::exponential: return p1_;
    case Family::weibull:
      return p1_ == 1.0 ? 1.0 / p2_ : (p1_ / p2_) * std::pow(s / p2_, p1_ - 1.0);
    case Family::uniform: return s < p1_ ? 1.0 / (p1_ - s) : kInf;
    case Family::lomax: return p1_ / (p2_ + s);
    case Family::table: {
      const double tail = table_tail(s);
      return tail > 0.0 ? pdf(s) / tail : kInf;
    }
  }
  return 0.0;
}

double PathLaw::optical_depth(double s) const {
  switch (family_) {
    case Family::exponential: return p1_ * s;
    case Family::weibull: return std::pow(s / p2_, p1_);
    case Family::uniform: return s < p1_ ? -std::log1p(-s / p1_) : kInf;
    case Family::lomax: return p1_ * std::log1p(s / p2_);
    case Family::table: {
      const double tail = table_tail(s);
      return tail > 0.0 ? -std::log(tail) : kInf;
    }
  }
  return 0.0;
}

double PathLaw::survival(double s) const {
  switch (family_) {
    case Family::uniform: return s < p1_ ? 1.0 - s / p1_ : 0.0;
    case Family::table: return table_tail(s);
    default: return std::exp(-optical_depth(s));
  }
}

double PathLaw::pdf(double s) const {
  switch (family_) {
    case Family::uniform: return s < p1_ ? 1.0 / p1_ : 0.0;
    case Family::table: {
      const auto& t = *table_;
      if (s >= t.s.back()) return 0.0;
      const std::size_t i = table_index(s);
      const double w = (s - t.s[i]) / (t.s[i + 1] - t.s[i]);
      return t.q[i] + (t.q[i + 1] - t.q[i]) * w;
    }
    default: return sigma(s) * survival(s);
  }
}

double PathLaw::inverse_optical_depth(double t) const {
  if (t <= 0.0) return 0.0;
  switch (family_) {
    case Family::exponential: return t / p1_;
    case Family::weibull: return p2_ * std::pow(t, 1.0 / p1_);
    case Family::uniform: return -p1_ * std::expm1(-t);
    case Family::lomax: return p2_ * std::expm1(t / p1_);
    case Family::table: {
      const auto& tb = *table_;
      const double target = std::exp(-t);
      // tail is nonincreasing; locate the first node whose tail drops below target.
      std::size_t i = 0;
      std::size_t lo = 0;
      std::size_t hi = tb.s.size() - 1;
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (tb.tail[mid] >= target) lo = mid;
        else hi = mid;
      }
      i = lo;
      const double m = tb.tail[i] - target;
      const double h = tb.s[i + 1] - tb.s[i];
      const double g = (tb.q[i + 1] - tb.q[i]) / h;
      const double disc = std::max(0.0, tb.q[i] * tb.q[i] + 2.0 * g * m);
      const double denom = tb.q[i] + std::sqrt(disc);
      const double x = denom > 0.0 ? 2.0 * m / denom : 0.0;
      return std::min(tb.s[i] + std::clamp(x, 0.0, h), tb.s.back());
    }
  }
  return 0.0;
}

double PathLaw::support_end() const {
  switch (family_) {
    case Family::uniform: return p1_;
    case Family::table: return table_->s.back();
    default: return kInf;
  }
}

const std::vector<double>& PathLaw::breakpoints() const {
  static const std::vector<double> none;
  return family_ == Family::table ? table_->s : none;
}

}  // namespace nct
