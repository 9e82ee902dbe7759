#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "cachenet/errors.hpp"

namespace cachenet {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double truncation_radius = 1e5;  // finite stand-in for an infinite upper limit
  int max_subdivisions = 4000;
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;  // conservative absolute error estimate
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
// Column 0: node, column 1: Gauss weight, column 2: Kronrod weight.
inline constexpr double kGK15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

template <class F>
double gk15(const F& f, double a, double b, double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double y0 = f(mid);
  double g7 = kGK15[0][1] * y0;
  double k15 = kGK15[0][2] * y0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGK15[i][0];
    const double yi = f(mid + dx) + f(mid - dx);
    g7 += kGK15[i][1] * yi;
    k15 += kGK15[i][2] * yi;
  }
  g7 *= half;
  k15 *= half;

  // Standard QUADPACK-style rescaling of the raw Gauss/Kronrod gap.
  err = 200.0 * std::fabs(g7 - k15);
  err *= std::sqrt(err);
  if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
  return k15;
}

struct Panel {
  double a, b, value, error;
};

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [lo, hi].
// Pass hi = +infinity for a semi-infinite range; it is mapped onto
// [lo, truncation_radius] after a tail-magnitude check at the truncation point.
// Throws NumericFailure (carrying the partial estimate) when the subdivision
// budget is exhausted or the tail check fails.
template <class F>
IntegralResult integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
  if (!(lo < hi)) throw std::invalid_argument("integrate: requires lo < hi");

  bool seed_log_panels = false;
  if (std::isinf(hi)) {
    const double trunc = spec.truncation_radius;
    if (!(trunc > lo)) throw std::invalid_argument("integrate: truncation_radius <= lo");
    const double tail = std::fabs(f(trunc));
    if (!(tail < spec.abs_tol / trunc)) {
      throw NumericFailure(
          "integrate: integrand not negligible at truncation radius", 0.0, tail * trunc);
    }
    hi = trunc;
    // The integrand may live on a scale far below the truncation radius, where
    // a single Gauss-Kronrod panel has no nodes; start from log-spaced panels.
    seed_log_panels = true;
  }

  std::vector<detail::Panel> panels;
  panels.reserve(64);
  std::vector<double> breaks{lo};
  if (seed_log_panels) {
    const double width = hi - lo;
    for (int k = 12; k >= 1; --k) {
      const double b = lo + width * std::pow(10.0, -k);
      if (b > breaks.back()) breaks.push_back(b);
    }
  }
  breaks.push_back(hi);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    detail::Panel p{breaks[i], breaks[i + 1], 0.0, 0.0};
    p.value = detail::gk15(f, p.a, p.b, p.error);
    panels.push_back(p);
  }

  auto totals = [&panels]() {
    double v = 0.0, e = 0.0;
    for (const auto& p : panels) {
      v += p.value;
      e += p.error;
    }
    return std::pair<double, double>(v, e);
  };

  int splits = 0;
  while (true) {
    auto [value, error] = totals();
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::fabs(value));
    if (error <= target) return {value, error};
    if (splits >= spec.max_subdivisions) {
      throw NumericFailure("integrate: max subdivisions exceeded", value, error);
    }
    // Split the worst panel.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      if (panels[i].error > panels[worst].error) worst = i;
    }
    detail::Panel old = panels[worst];
    const double mid = 0.5 * (old.a + old.b);
    if (!(old.a < mid && mid < old.b)) {
      // Interval no longer splittable in double precision; accept its estimate.
      auto [v, e] = totals();
      if (e <= 10 * target) return {v, e};
      throw NumericFailure("integrate: interval exhausted below tolerance", v, e);
    }
    detail::Panel left{old.a, mid, 0.0, 0.0};
    detail::Panel right{mid, old.b, 0.0, 0.0};
    left.value = detail::gk15(f, left.a, left.b, left.error);
    right.value = detail::gk15(f, right.a, right.b, right.error);
    panels[worst] = left;
    panels.push_back(right);
    ++splits;
  }
}

// Bisection root finding on [lo, hi]; requires a sign change over the bracket.
// Returns the bracket midpoint once the bracket width is below tol.
template <class F>
double find_root_bisect(F&& g, double lo, double hi, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("find_root_bisect: requires lo < hi");
  if (!(tol > 0)) throw std::invalid_argument("find_root_bisect: requires tol > 0");
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0) == (ghi > 0)) {
    throw BracketFailure("find_root_bisect: no sign change over [lo, hi]");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at double-precision resolution
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cachenet
