#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nct {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_panels = 4000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (21-point Kronrod, 10-point Gauss) integration on [a, b].
/// Interior breakpoints seed the initial panels; points outside (a, b) are
/// ignored. Panels with the largest error estimate are bisected until
/// error <= max(abs_tol, rel_tol * |value|).
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadOptions& opt = {},
                              std::span<const double> breakpoints = {});

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule on [-1, 1], nodes ascending, mirrored exactly about 0.
GaussLegendreRule gauss_legendre(int n);

/// Cached rule for small n (n <= 64); avoids recomputing in hot loops.
const GaussLegendreRule& gauss_legendre_cached(int n);

}  // namespace nct
