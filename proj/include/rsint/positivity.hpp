#pragma once

// Positivity of y -> ∫_a^y f dg for positive continuous f and non-negative g
// with g(a) = 0, when f has bounded variation near x_L = inf{x : g(x) > 0}.
//
// Detectors for the two elementary cases, a structural scan, and checkers
// for the measure-theoretic objects of the general argument: the variation
// measure nu of f, mu = nu / f, the bound |∫ g df| <= ∫ f g dmu, and a
// per-instance Gronwall check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rsint/bv.hpp"
#include "rsint/errors.hpp"
#include "rsint/integrand.hpp"
#include "rsint/stieltjes.hpp"

namespace rsint {

struct Atom {
  double point;
  double mass;
};

struct DensityPiece {
  double lo;
  double hi;
  double density;
};

/// Finite Borel measure: point masses plus piecewise-constant density.
class VariationMeasure {
 public:
  VariationMeasure(Interval domain, std::vector<Atom> atoms, std::vector<DensityPiece> pieces)
      : domain_(domain), atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
    for (const auto& at : atoms_) {
      detail::require_point(domain_, at.point, "atom");
      if (!(at.mass >= 0.0) || !std::isfinite(at.mass)) throw SpecError("atom mass must be >= 0");
    }
    for (const auto& p : pieces_) {
      detail::require_subinterval(domain_, p.lo, p.hi);
      if (!(p.density >= 0.0) || !std::isfinite(p.density)) {
        throw SpecError("density must be >= 0");
      }
    }
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& l, const Atom& r) { return l.point < r.point; });
  }

  const Interval& interval() const noexcept { return domain_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<DensityPiece>& pieces() const noexcept { return pieces_; }

  /// nu([c, d)).
  double measure(double c, double d) const {
    detail::require_subinterval(domain_, c, d);
    double m = 0.0;
    for (const auto& p : pieces_) {
      const double lo = std::max(c, p.lo);
      const double hi = std::min(d, p.hi);
      if (hi > lo) m += p.density * (hi - lo);
    }
    for (const auto& at : atoms_) {
      if (at.point >= c && at.point < d) m += at.mass;
    }
    return m;
  }

  /// ∫_{[c, d)} u dnu.
  double integrate(const BVFunction& u, double c, double d) const {
    detail::require_subinterval(domain_, c, d);
    double s = 0.0;
    for (const auto& p : pieces_) {
      const double lo = std::max(c, p.lo);
      const double hi = std::min(d, p.hi);
      if (hi > lo && p.density != 0.0) s += p.density * u.integral(lo, hi);
    }
    for (const auto& at : atoms_) {
      if (at.point >= c && at.point < d) s += at.mass * u(at.point);
    }
    return s;
  }

 private:
  Interval domain_;
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> pieces_;
};

/// nu with nu([c, d)) = V_c^d f: density |slope| on every segment of f.
inline VariationMeasure variation_measure(const PiecewiseLinear& f) {
  std::vector<DensityPiece> pieces;
  const auto& ks = f.knots();
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    const double s = std::abs(f.slope(i));
    if (s != 0.0) pieces.push_back({ks[i].x, ks[i + 1].x, s});
  }
  return VariationMeasure(f.interval(), {}, std::move(pieces));
}

namespace detail {

/// log1p(r) / r.
inline double log_ratio(double r) {
  if (std::abs(r) < 1e-3) return 1.0 + r * (-0.5 + r * (1.0 / 3 + r * (-0.25 + r * 0.2)));
  return std::log1p(r) / r;
}

/// (log1p(r) - r) / r^2.
inline double log_defect(double r) {
  if (std::abs(r) < 1e-3) {
    return -0.5 + r * (1.0 / 3 + r * (-0.25 + r * (0.2 - r / 6.0)));
  }
  return (std::log1p(r) - r) / (r * r);
}

/// ∫_l^r (u0 + q (x - l)) / (f0 + t (x - l)) dx with f > 0 on [l, r].
inline double linear_over_linear(double u0, double q, double f0, double t, double len) {
  const double rr = t * len / f0;
  return len * (u0 / f0 * log_ratio(rr) - q * len / f0 * log_defect(rr));
}

}  // namespace detail

/// mu(dx) = nu(dx) / f(x) for piecewise-linear f > 0.
class WeightedMeasure {
 public:
  WeightedMeasure(VariationMeasure base, PiecewiseLinear f)
      : base_(std::move(base)), f_(std::move(f)) {
    if (!(base_.interval() == f_.interval())) {
      throw SpecError("measure and weight must share the interval");
    }
    const auto [lo, hi] = f_.range(f_.interval().a(), f_.interval().b());
    (void)hi;
    if (!(lo > 0.0)) throw PreconditionError("weight 1/f needs min f > 0");
  }

  const VariationMeasure& base() const noexcept { return base_; }
  const PiecewiseLinear& weight_source() const noexcept { return f_; }

  /// ∫_{[c, d)} u / f dnu, in closed form piece by piece.
  double integrate(const BVFunction& u, double c, double d) const {
    detail::require_subinterval(base_.interval(), c, d);
    std::vector<double> fx;
    for (const auto& k : f_.knots()) fx.push_back(k.x);
    const auto cuts = detail::merge_sorted(fx, u.structural_points());
    double s = 0.0;
    for (const auto& p : base_.pieces()) {
      const double lo = std::max(c, p.lo);
      const double hi = std::min(d, p.hi);
      if (!(hi > lo) || p.density == 0.0) continue;
      std::vector<double> pts{lo};
      for (double x : cuts) {
        if (x > lo && x < hi) pts.push_back(x);
      }
      pts.push_back(hi);
      for (std::size_t i = 1; i < pts.size(); ++i) {
        const double l = pts[i - 1];
        const double r = pts[i];
        const double len = r - l;
        const double u0 = u.right_limit(l);
        const double q = (u.left_limit(r) - u0) / len;
        const double f0 = f_(l);
        const double t = (f_(r) - f0) / len;
        s += p.density * detail::linear_over_linear(u0, q, f0, t, len);
      }
    }
    for (const auto& at : base_.atoms()) {
      if (at.point >= c && at.point < d) s += at.mass * u(at.point) / f_(at.point);
    }
    return s;
  }

  double measure(double c, double d) const {
    return integrate(BVFunction(PiecewiseLinear::constant(base_.interval(), 1.0)), c, d);
  }

 private:
  VariationMeasure base_;
  PiecewiseLinear f_;
};

enum class WitnessMethod { Case1, Case2, Scan };

inline const char* to_string(WitnessMethod m) {
  switch (m) {
    case WitnessMethod::Case1: return "case1";
    case WitnessMethod::Case2: return "case2";
    default: return "scan";
  }
}

struct PositivityWitness {
  double y;
  double lower_bound;
  WitnessMethod method;
  std::optional<Interval> interval;
  /// rs_bv(f, g, y) at the time of detection.
  double value = 0.0;
  double error_bound = 0.0;
  /// Case 1 only: y = x_L + epsilon.
  std::optional<double> epsilon;
};

namespace detail {

/// First structural point where g is positive or turns positive to the right.
inline std::optional<double> first_positive(const BVFunction& g) {
  const auto pts = g.structural_points();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (g.right_limit(pts[i]) > 0.0 || g.left_limit(pts[i + 1]) > 0.0) return pts[i];
  }
  if (g(pts.back()) > 0.0) return pts.back();
  return std::nullopt;
}

inline std::optional<PositivityWitness> certify(const IntegrandSpec& f, const BVFunction& g,
                                                PositivityWitness w,
                                                const QuadratureOptions& opts) {
  IntegralResult r;
  try {
    r = rs_bv(f, g, w.y, opts);
  } catch (const ToleranceError&) {
    return std::nullopt;
  }
  if (!r.certified) return std::nullopt;
  w.value = r.value;
  w.error_bound = r.error_bound;
  w.lower_bound = std::min(w.lower_bound, r.value - r.error_bound);
  if (!(w.lower_bound > 0.0)) return std::nullopt;
  return w;
}

}  // namespace detail

/// Jump of g at x_L: the integral just right of x_L is at least
/// g+(y) min f - g-(y) max f over [x_L - eps, x_L + eps].
inline std::optional<PositivityWitness> detect_case1(const BVFunction& g, const IntegrandSpec& f,
                                                     const QuadratureOptions& opts = {}) {
  const auto xl = detail::first_positive(g);
  const double a = g.interval().a();
  const double b = g.interval().b();
  if (!xl || *xl >= b || !(g.right_limit(*xl) > 0.0)) return std::nullopt;
  const auto pts = g.structural_points();
  const double next = *std::upper_bound(pts.begin(), pts.end(), *xl);
  const double eps = 0.5 * (next - *xl);
  const double y = *xl + eps;
  const JordanPair jp = jordan_decompose(g);
  const RangeBounds rb = range_bounds(f, std::max(a, *xl - eps), y);
  if (!rb.certified || !(rb.lower > 0.0)) return std::nullopt;
  const double lb = jp.pos(y) * rb.lower - jp.neg(y) * rb.upper;
  if (!(lb > 0.0)) return std::nullopt;
  return detail::certify(
      f, g, {.y = y, .lower_bound = lb, .method = WitnessMethod::Case1, .epsilon = eps}, opts);
}

/// g non-decreasing up to y: the integral is at least g+(y) min_{[a,y]} f.
inline std::optional<PositivityWitness> detect_case2(const IntegrandSpec& f, const BVFunction& g,
                                                     double y, const QuadratureOptions& opts = {}) {
  const double a = g.interval().a();
  if (!(y > a) || y > g.interval().b()) throw DomainError("y must lie in (a, b]");
  const JordanPair jp = jordan_decompose(g);
  const double neg = jp.neg(y);
  const double pos = jp.pos(y);
  if (neg != 0.0 || !(pos > 0.0)) return std::nullopt;
  const RangeBounds rb = range_bounds(f, a, y);
  if (!rb.certified || !(rb.lower > 0.0)) return std::nullopt;
  return detail::certify(
      f, g, {.y = y, .lower_bound = pos * rb.lower, .method = WitnessMethod::Case2}, opts);
}

struct GdfBound {
  double lhs;
  double rhs;
};

/// lhs = |∫_a^y g df|, rhs = ∫_{[a,y)} f g dmu = ∫_a^y g |f'| dx.
inline GdfBound gdf_bound_check(const PiecewiseLinear& f, const BVFunction& g, double y) {
  const double a = f.interval().a();
  if (!(f.interval() == g.interval())) throw SpecError("f and g must share the interval");
  if (!(y > a) || y > f.interval().b()) throw DomainError("y must lie in (a, b]");
  const auto [lo, hi] = f.range(a, f.interval().b());
  (void)hi;
  if (!(lo > 0.0)) throw PreconditionError("f is not certified positive");
  double signed_sum = 0.0;
  double abs_sum = 0.0;
  const auto pts = f.partition(a, y);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double s = f.slope(f.segment_of(0.5 * (pts[i - 1] + pts[i])));
    if (s == 0.0) continue;
    const double gi = g.integral(pts[i - 1], pts[i]);
    signed_sum += s * gi;
    abs_sum += std::abs(s) * gi;
  }
  return {std::abs(signed_sum), abs_sum};
}

enum class GronwallOutcome { NegativeInput, HypothesisViolated, ConclusionHolds, ConclusionViolated };

inline const char* to_string(GronwallOutcome o) {
  switch (o) {
    case GronwallOutcome::NegativeInput: return "negative-input";
    case GronwallOutcome::HypothesisViolated: return "hypothesis-violated";
    case GronwallOutcome::ConclusionHolds: return "conclusion-holds";
    default: return "conclusion-violated";
  }
}

struct GronwallReport {
  GronwallOutcome outcome;
  /// First offending point, if any.
  std::optional<double> at;
  double lhs = 0.0;
  double rhs = 0.0;
  std::size_t points_checked = 0;
};

/// Checks u(y) <= ∫_{[a,y)} u dmu at the test points; if that holds
/// everywhere, checks the conclusion u <= strictness.
///
/// Test points: structural points of u and mu, b, midpoints between them,
/// and a geometric sequence approaching the first point where u turns
/// positive from the right.
inline GronwallReport gronwall_verify(const BVFunction& u, const WeightedMeasure& mu,
                                      double strictness) {
  if (!(strictness >= 0.0)) throw DomainError("strictness must be >= 0");
  const double a = u.interval().a();
  std::vector<double> pts = u.structural_points();
  std::vector<double> extra;
  for (const auto& k : mu.weight_source().knots()) extra.push_back(k.x);
  for (const auto& p : mu.base().pieces()) {
    extra.push_back(p.lo);
    extra.push_back(p.hi);
  }
  for (const auto& at : mu.base().atoms()) extra.push_back(at.point);
  std::sort(extra.begin(), extra.end());
  pts = detail::merge_sorted(pts, extra);
  std::vector<double> probes;
  for (std::size_t i = 1; i < pts.size(); ++i) probes.push_back(0.5 * (pts[i - 1] + pts[i]));
  if (const auto x0 = detail::first_positive(u); x0 && *x0 < pts.back()) {
    const double next = *std::upper_bound(pts.begin(), pts.end(), *x0);
    double h = next - *x0;
    for (int j = 0; j < 60; ++j) {
      h *= 0.5;
      if (!(*x0 + h > *x0)) break;
      probes.push_back(*x0 + h);
    }
  }
  std::sort(probes.begin(), probes.end());
  pts = detail::merge_sorted(pts, probes);

  GronwallReport rep{.outcome = GronwallOutcome::ConclusionHolds};
  for (double y : pts) {
    if (u(y) < -strictness) return {GronwallOutcome::NegativeInput, y, u(y), 0.0, 0};
  }
  double acc = 0.0;
  double prev = a;
  for (double y : pts) {
    if (y > prev) acc += mu.integrate(u, prev, y);
    prev = y;
    const double v = u(y);
    ++rep.points_checked;
    if (v > acc + slack(std::max(std::abs(v), std::abs(acc)), 1e-12)) {
      return {GronwallOutcome::HypothesisViolated, y, v, acc, rep.points_checked};
    }
  }
  for (double y : pts) {
    if (u(y) > strictness) return {GronwallOutcome::ConclusionViolated, y, u(y), 0.0,
                                   rep.points_checked};
  }
  return rep;
}

/// First structural point y >= x_L of g with a certified positive integral.
inline std::optional<PositivityWitness> scan_structural(const IntegrandSpec& f,
                                                        const BVFunction& g,
                                                        const QuadratureOptions& opts = {}) {
  const auto xl = detail::first_positive(g);
  if (!xl) return std::nullopt;
  std::vector<double> ys;
  for (double p : g.structural_points()) {
    if (p >= *xl && p > g.interval().a()) ys.push_back(p);
  }
  const IntegralCurve J = curve(f, g, ys, opts);
  if (!J.certified) return std::nullopt;
  for (const auto& p : J.points) {
    const double lb = p.value - p.error_bound;
    if (p.y >= *xl && lb > 0.0) {
      return PositivityWitness{.y = p.y, .lower_bound = lb, .method = WitnessMethod::Scan,
                               .value = p.value, .error_bound = p.error_bound};
    }
  }
  return std::nullopt;
}

struct SearchConfig {
  QuadratureOptions quad;
};

/// Finds y in (a, b] with ∫_a^y f dg > 0: case 2 at structural points, then
/// case 1, then a scan of all structural points from x_L.
inline PositivityWitness find_positive_y(const IntegrandSpec& f, const BVFunction& g,
                                         const SearchConfig& config = {}) {
  const double a = g.interval().a();
  const double b = g.interval().b();
  const auto pts = g.structural_points();
  if (std::abs(g(a)) > 1e-12) throw PreconditionError("g(a) must be 0");
  for (double p : pts) {
    if (g(p) < 0.0 || (p > a && g.left_limit(p) < 0.0)) {
      throw PreconditionError("g is negative near x = " + std::to_string(p));
    }
  }
  const auto xl = detail::first_positive(g);
  if (!xl) throw PreconditionError("g vanishes identically");
  if (*xl < b) {
    const auto& cover = f.linear_cover();
    if (!cover || !(cover->interval().a() <= *xl && *xl < cover->interval().b())) {
      throw PreconditionError(
          "unbounded-variation regime: f has no piecewise-linear cover of [x_L, x_L + eps], "
          "x_L = " + std::to_string(*xl));
    }
  }
  if (!check_positive(f, 4097).certified) throw PreconditionError("f is not certified positive");

  std::vector<double> ys;
  for (double p : pts) {
    if (p >= *xl && p > a) ys.push_back(p);
  }
  const JordanPair jp = jordan_decompose(g);
  for (double y : ys) {
    if (jp.neg(y) != 0.0) break;
    if (auto w = detect_case2(f, g, y, config.quad)) return *w;
  }
  if (auto w = detect_case1(g, f, config.quad)) return *w;
  if (auto w = scan_structural(f, g, config.quad)) return *w;
  if (g.is_pure_step()) {
    throw InconsistencyError("structural scan found no positive value on a pure step integrator");
  }
  throw InconclusiveError("no certified positive value at the " + std::to_string(ys.size()) +
                          " structural points of g");
}

/// [c, d] with c = witness.y on which J stays above lower_bound / 2: d is
/// the midpoint to the next jump (or b), shrunk while f_max * V_c^d g
/// exceeds the available margin.
inline Interval positive_interval(const IntegrandSpec& f, const BVFunction& g,
                                  const PositivityWitness& w, const QuadratureOptions& opts = {}) {
  const double b = g.interval().b();
  const double c = w.y;
  if (!(c < b)) throw DomainError("witness at b leaves no interval [c, d] with c < d");
  const auto js = g.jumps(c, b);
  const double limit = js.empty() ? b : 0.5 * (c + js.front().point);
  if (g.is_pure_step()) return Interval(c, limit);
  const IntegralResult r = rs_bv(f, g, c, opts);
  const double margin = r.value - r.error_bound - 0.5 * w.lower_bound;
  if (!(margin > 0.0)) throw InconclusiveError("no margin above lower_bound / 2 at the witness");
  const double f_max = range_bounds(f, c, limit).upper;
  auto fits = [&](double d) { return f_max * g.total_variation(c, d) <= margin; };
  if (fits(limit)) return Interval(c, limit);
  double lo = c;
  double hi = limit;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (fits(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!(lo > c)) throw InconclusiveError("positive interval collapsed to a point");
  return Interval(c, lo);
}

}  // namespace rsint
