#pragma once

// Riemann-Stieltjes integrals  J(y) = ∫_a^y f dg  of continuous f against
// BVFunction integrators.
//
// Step parts are integrated exactly: each jump at p in (a, y] contributes
// f(p) * (g(p) - g(p-)). Linear parts reduce to sums of slope * ∫ f dx,
// computed exactly where f is piecewise linear and otherwise by composite
// midpoint sums whose error is bounded through the modulus of continuity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <span>
#include <vector>

#include "rsint/bv.hpp"
#include "rsint/errors.hpp"
#include "rsint/integrand.hpp"

namespace rsint {

struct IntegralResult {
  double value = 0.0;
  double error_bound = 0.0;
  /// False whenever a heuristic (sampled) modulus entered the bound.
  bool certified = true;

  IntegralResult& operator+=(const IntegralResult& r) {
    value += r.value;
    error_bound += r.error_bound;
    certified = certified && r.certified;
    return *this;
  }
};

struct QuadratureOptions {
  double tol = 1e-9;
  int max_rounds = 40;
  std::size_t max_evaluations = std::size_t{1} << 24;
};

namespace detail {

inline void require_upper_limit(const Interval& g_dom, const IntegrandSpec& f, double y) {
  if (!(y > g_dom.a()) || y > g_dom.b()) {
    throw DomainError("upper limit y = " + std::to_string(y) + " outside (a, b]");
  }
  if (!(f.domain().a() <= g_dom.a() && y <= f.domain().b())) {
    throw DomainError("integrand domain does not cover [a, y]");
  }
}

/// ∫_u^v f dg for continuous piecewise-linear g.
inline IntegralResult pl_integral(const IntegrandSpec& f, const PiecewiseLinear& g, double u,
                                  double v, const QuadratureOptions& opts,
                                  const ModulusEstimator& omega) {
  struct Piece {
    double lo;
    double hi;
    double slope;
  };
  IntegralResult out;
  std::vector<Piece> approx;
  const auto pts = g.partition(u, v);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double lo = pts[i - 1];
    const double hi = pts[i];
    const double s = g.slope(g.segment_of(0.5 * (lo + hi)));
    if (s == 0.0) continue;
    if (f.linear_on(lo, hi)) {
      // Trapezoid is exact on each linear piece of f.
      const auto fp = f.linear_cover()->partition(lo, hi);
      for (std::size_t j = 1; j < fp.size(); ++j) {
        out.value += s * 0.5 * (fp[j] - fp[j - 1]) * (f(fp[j]) + f(fp[j - 1]));
      }
    } else {
      approx.push_back({lo, hi, s});
    }
  }
  if (approx.empty()) return out;

  auto bound_for = [&](double m) {
    double b = 0.0;
    for (const auto& p : approx) {
      const double len = p.hi - p.lo;
      b += std::abs(p.slope) * len * omega.cell_error(len / m);
    }
    return b;
  };

  // Doubling finds a sufficient cell count; bisection then trims it to the
  // smallest one meeting the tolerance. Only the bound is evaluated here.
  int rounds = 0;
  double m = 1.0;
  double bound = bound_for(m);
  while (bound > opts.tol && rounds < opts.max_rounds) {
    const double next_evals = 2.0 * m * static_cast<double>(approx.size());
    if (next_evals > static_cast<double>(opts.max_evaluations)) break;
    m *= 2.0;
    ++rounds;
    bound = bound_for(m);
  }
  if (bound <= opts.tol && m > 1.0) {
    double lo = 0.5 * m;
    while (m - lo > 1.0) {
      const double mid = std::floor(0.5 * (lo + m));
      const double b = bound_for(mid);
      if (b <= opts.tol) {
        m = mid;
        bound = b;
      } else {
        lo = mid;
      }
    }
  }

  double value = 0.0;
  const auto count = static_cast<std::size_t>(m);
  for (const auto& p : approx) {
    const double h = (p.hi - p.lo) / m;
    double sum = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      sum += f(p.lo + (static_cast<double>(j) + 0.5) * h);
    }
    value += p.slope * h * sum;
  }
  out.value += value;
  out.error_bound = bound;
  out.certified = !omega.heuristic();
  if (bound > opts.tol) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "tolerance %.3g unreachable; best bound %.3g (value %.17g)",
                  opts.tol, bound, out.value);
    throw ToleranceError(msg, out.value, bound);
  }
  return out;
}

}  // namespace detail

/// Exact integral against a step function: sum of f(p) times the jump at p
/// over jump points p in (a, y]. The right-continuous convention leaves no
/// jump at a.
inline IntegralResult rs_jump_exact(const IntegrandSpec& f, const StepFunction& g, double y) {
  detail::require_upper_limit(g.interval(), f, y);
  double sum = 0.0;
  for (const auto& j : g.jumps(g.interval().a(), y)) sum += f(j.point) * j.size;
  return {sum, 0.0, true};
}

inline IntegralResult rs_pl_certified(const IntegrandSpec& f, const PiecewiseLinear& g, double y,
                                      const QuadratureOptions& opts = {}) {
  detail::require_upper_limit(g.interval(), f, y);
  if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");
  const ModulusEstimator omega(f);
  return detail::pl_integral(f, g, g.interval().a(), y, opts, omega);
}

inline IntegralResult rs_bv(const IntegrandSpec& f, const BVFunction& g, double y,
                            const QuadratureOptions& opts = {}) {
  IntegralResult r = rs_jump_exact(f, g.step(), y);
  if (!g.is_pure_step()) r += rs_pl_certified(f, g.linear(), y, opts);
  return r;
}

/// Definitional Riemann-Stieltjes sum on a uniform partition of [a, y]
/// refined by the jump points of g, midpoint tags. The bound
/// omega_f(mesh) * V_a^y g does not depend on the tag choice.
inline IntegralResult rs_bruteforce_oracle(const IntegrandSpec& f, const BVFunction& g, double y,
                                           double mesh) {
  const double a = g.interval().a();
  detail::require_upper_limit(g.interval(), f, y);
  if (!(mesh > 0.0)) throw DomainError("mesh must be positive");
  const auto n = static_cast<std::size_t>(std::ceil((y - a) / mesh));
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    grid.push_back(a + (y - a) * (static_cast<double>(i) / static_cast<double>(n)));
  }
  grid.push_back(y);
  std::vector<double> jp;
  for (const auto& j : g.jumps(a, y)) jp.push_back(j.point);
  const auto pts = detail::merge_sorted(grid, jp);

  double sum = 0.0;
  double prev = g(pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double cur = g(pts[i]);
    sum += f(0.5 * (pts[i - 1] + pts[i])) * (cur - prev);
    prev = cur;
  }
  const ModulusEstimator omega(f);
  return {sum, omega(mesh) * g.total_variation(a, y), !omega.heuristic()};
}

struct IntegrationByParts {
  double int_f_dg;
  double int_g_df;
  double boundary;
  double residual;
  double bound;
};

/// Checks ∫ g df + ∫ f dg = f(y)g(y) - f(a)g(a) for continuous
/// piecewise-linear f. ∫ g df = sum over pieces of slope * ∫ g dx, exact.
inline IntegrationByParts integration_by_parts(const PiecewiseLinear& f, const BVFunction& g,
                                               double y, const QuadratureOptions& opts = {}) {
  const double a = g.interval().a();
  const IntegralResult fdg = rs_bv(IntegrandSpec(f), g, y, opts);
  double gdf = 0.0;
  const auto pts = f.partition(a, y);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double s = f.slope(f.segment_of(0.5 * (pts[i - 1] + pts[i])));
    if (s != 0.0) gdf += s * g.integral(pts[i - 1], pts[i]);
  }
  const double boundary = f(y) * g(y) - f(a) * g(a);
  return {fdg.value, gdf, boundary, std::abs(gdf + fdg.value - boundary), fdg.error_bound};
}

inline double integration_by_parts_residual(const PiecewiseLinear& f, const BVFunction& g,
                                            double y, const QuadratureOptions& opts = {}) {
  return integration_by_parts(f, g, y, opts).residual;
}

enum class PointKind { Jump, Grid };

struct CurvePoint {
  double y;
  double value;
  double error_bound;
  PointKind kind;
  /// J is constant on [y, next sample) (on [y, b] for the last sample).
  bool constant_after;
};

struct IntegralCurve {
  std::vector<CurvePoint> points;
  bool certified = true;
};

/// J(y) on a sorted grid in (a, b], in one ascending pass. Every jump point
/// of g up to the last grid point is sampled as well, so for pure step g the
/// curve is exact and constant between consecutive samples.
inline IntegralCurve curve(const IntegrandSpec& f, const BVFunction& g,
                           std::span<const double> y_grid, const QuadratureOptions& opts = {}) {
  const double a = g.interval().a();
  if (y_grid.empty()) throw DomainError("curve needs at least one grid point");
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    if (i > 0 && !(y_grid[i - 1] < y_grid[i])) throw DomainError("curve grid must increase strictly");
  }
  const double y_max = y_grid.back();
  detail::require_upper_limit(g.interval(), f, y_grid.front());
  detail::require_upper_limit(g.interval(), f, y_max);

  const auto js = g.jumps(a, y_max);
  const bool pure = g.is_pure_step();
  const ModulusEstimator omega(f);

  IntegralCurve out;
  double step_acc = 0.0;
  IntegralResult lin;
  double prev = a;
  std::size_t gi = 0;
  std::size_t ji = 0;
  while (gi < y_grid.size() || ji < js.size()) {
    const double yg = gi < y_grid.size() ? y_grid[gi] : y_max + 1.0;
    const double yj = ji < js.size() ? js[ji].point : y_max + 1.0;
    const double y = std::min(yg, yj);
    if (!pure && y > prev) {
      QuadratureOptions seg = opts;
      seg.tol = opts.tol * (y - prev) / (y_max - a);
      lin += detail::pl_integral(f, g.linear(), prev, y, seg, omega);
    }
    PointKind kind = PointKind::Grid;
    if (yj == y) {
      step_acc += f(y) * js[ji].size;
      kind = PointKind::Jump;
      ++ji;
    }
    if (yg == y) ++gi;
    out.points.push_back({y, step_acc + lin.value, lin.error_bound, kind, pure});
    prev = y;
  }
  if (pure && y_max < g.interval().b()) {
    out.points.back().constant_after = g.jumps(y_max, g.interval().b()).empty();
  }
  out.certified = lin.certified;
  return out;
}

}  // namespace rsint
