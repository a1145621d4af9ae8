#pragma once

// Finite representations of functions of bounded variation on [a, b]:
// right-continuous step functions, continuous piecewise-linear functions and
// their sums. Every value is immutable after construction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rsint/errors.hpp"

namespace rsint {

/// Absolute slack used for sign and equality claims on double results.
inline double slack(double magnitude, double relative = 1e-9) {
  return relative * (1.0 + std::abs(magnitude));
}

class Interval {
 public:
  Interval(double a, double b) : a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
      throw DomainError("interval requires finite a < b, got [" +
                        std::to_string(a) + ", " + std::to_string(b) + "]");
    }
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double length() const noexcept { return b_ - a_; }
  bool contains(double x) const noexcept { return x >= a_ && x <= b_; }
  bool contains(const Interval& other) const noexcept {
    return other.a_ >= a_ && other.b_ <= b_;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

struct Jump {
  double point;
  double size;

  friend bool operator==(const Jump&, const Jump&) = default;
};

namespace detail {

inline void require_point(const Interval& dom, double x, const char* what) {
  if (!dom.contains(x)) {
    throw DomainError(std::string(what) + ": x = " + std::to_string(x) +
                      " outside [" + std::to_string(dom.a()) + ", " +
                      std::to_string(dom.b()) + "]");
  }
}

inline void require_subinterval(const Interval& dom, double c, double d) {
  if (!(c <= d) || !dom.contains(c) || !dom.contains(d)) {
    throw DomainError("need a <= c <= d <= b, got c = " + std::to_string(c) +
                      ", d = " + std::to_string(d));
  }
}

inline std::vector<double> merge_sorted(std::span<const double> lhs,
                                        std::span<const double> rhs) {
  std::vector<double> out;
  out.reserve(lhs.size() + rhs.size());
  std::set_union(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                 std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Right-continuous pure-jump function on [a, b].
///
/// The function equals values[0] on [a, p_1), values[i] on [p_i, p_{i+1}),
/// values[m] on [p_m, b), and end_value at b itself. Storing the value at b
/// separately makes half-open bricks such as χ_[u, b) representable.
///
/// Construction canonicalizes: a breakpoint at b is dropped (its piece is
/// empty) and breakpoints separating equal values are removed, so that every
/// stored breakpoint carries a non-zero jump.
class StepFunction {
 public:
  StepFunction(Interval domain, std::vector<double> breakpoints,
               std::vector<double> values, double end_value)
      : domain_(domain),
        breakpoints_(std::move(breakpoints)),
        values_(std::move(values)),
        end_(end_value) {
    canonicalize();
  }

  static StepFunction constant(Interval domain, double value) {
    return StepFunction(domain, {}, {value}, value);
  }

  static StepFunction zero(Interval domain) { return constant(domain, 0.0); }

  /// height * χ_[lo, hi) restricted to the domain.
  static StepFunction indicator(Interval domain, double lo, double hi,
                                double height = 1.0) {
    if (!(lo < hi) || lo < domain.a() || hi > domain.b()) {
      throw SpecError("indicator needs a <= lo < hi <= b");
    }
    std::vector<double> bps;
    std::vector<double> vals;
    if (lo > domain.a()) {
      bps.push_back(lo);
      vals.push_back(0.0);
    }
    vals.push_back(height);
    if (hi < domain.b()) {
      bps.push_back(hi);
      vals.push_back(0.0);
    }
    return StepFunction(domain, std::move(bps), std::move(vals), 0.0);
  }

  /// Starts at `start` and adds each jump at its point (points in (a, b]).
  static StepFunction from_jumps(Interval domain, double start,
                                 std::vector<Jump> jumps) {
    std::sort(jumps.begin(), jumps.end(),
              [](const Jump& l, const Jump& r) { return l.point < r.point; });
    std::vector<double> bps;
    std::vector<double> vals{start};
    double jump_at_b = 0.0;
    for (const auto& j : jumps) {
      if (!(j.point > domain.a()) || j.point > domain.b()) {
        throw SpecError("jump point " + std::to_string(j.point) +
                        " outside (a, b]");
      }
      if (j.point == domain.b()) {
        jump_at_b += j.size;
      } else if (!bps.empty() && bps.back() == j.point) {
        vals.back() += j.size;
      } else {
        bps.push_back(j.point);
        vals.push_back(vals.back() + j.size);
      }
    }
    const double end = vals.back() + jump_at_b;
    return StepFunction(domain, std::move(bps), std::move(vals), end);
  }

  const Interval& interval() const noexcept { return domain_; }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values() const noexcept { return values_; }
  double end_value() const noexcept { return end_; }

  double operator()(double x) const {
    detail::require_point(domain_, x, "step evaluate");
    if (x == domain_.b()) return end_;
    return values_[count_at_or_below(x)];
  }

  double left_limit(double x) const {
    if (!(x > domain_.a()) || x > domain_.b()) {
      throw DomainError("left limit needs x in (a, b], got " +
                        std::to_string(x));
    }
    return values_[count_below(x)];
  }

  double right_limit(double x) const {
    if (x < domain_.a() || !(x < domain_.b())) {
      throw DomainError("right limit needs x in [a, b), got " +
                        std::to_string(x));
    }
    return values_[count_at_or_below(x)];
  }

  /// Jump at b, g(b) - g(b-).
  double end_jump() const noexcept { return end_ - values_.back(); }

  bool has_jumps() const noexcept {
    return !breakpoints_.empty() || end_jump() != 0.0;
  }

  bool is_zero() const noexcept {
    return breakpoints_.empty() && values_[0] == 0.0 && end_ == 0.0;
  }

  /// Signed jumps at points p in (c, d], ascending. The right-continuous
  /// convention puts no jump at c itself.
  std::vector<Jump> jumps(double c, double d) const {
    detail::require_subinterval(domain_, c, d);
    std::vector<Jump> out;
    auto first = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), c);
    for (auto it = first; it != breakpoints_.end() && *it <= d; ++it) {
      const auto i = static_cast<std::size_t>(it - breakpoints_.begin());
      out.push_back({*it, values_[i + 1] - values_[i]});
    }
    if (d == domain_.b() && c < d && end_jump() != 0.0) {
      out.push_back({domain_.b(), end_jump()});
    }
    return out;
  }

  double total_variation(double c, double d) const {
    double v = 0.0;
    for (const auto& j : jumps(c, d)) v += std::abs(j.size);
    return v;
  }

  /// Lebesgue integral over [c, d].
  double integral(double c, double d) const {
    detail::require_subinterval(domain_, c, d);
    double sum = 0.0;
    double left = c;
    std::size_t i = count_at_or_below(c);
    while (left < d) {
      const double right =
          i < breakpoints_.size() ? std::min(breakpoints_[i], d) : d;
      sum += values_[i] * (right - left);
      left = right;
      ++i;
    }
    return sum;
  }

  StepFunction scaled(double k) const {
    std::vector<double> vals(values_);
    for (auto& v : vals) v *= k;
    return StepFunction(domain_, breakpoints_, std::move(vals), end_ * k);
  }

  StepFunction operator-() const { return scaled(-1.0); }

  friend StepFunction operator+(const StepFunction& lhs,
                                const StepFunction& rhs) {
    if (!(lhs.domain_ == rhs.domain_)) {
      throw SpecError("cannot add step functions on different intervals");
    }
    auto bps = detail::merge_sorted(lhs.breakpoints_, rhs.breakpoints_);
    std::vector<double> vals;
    vals.reserve(bps.size() + 1);
    vals.push_back(lhs.values_[0] + rhs.values_[0]);
    for (double p : bps) vals.push_back(lhs.right_limit(p) + rhs.right_limit(p));
    return StepFunction(lhs.domain_, std::move(bps), std::move(vals),
                        lhs.end_ + rhs.end_);
  }

  friend StepFunction operator-(const StepFunction& lhs,
                                const StepFunction& rhs) {
    return lhs + (-rhs);
  }

  /// Product with χ_[a, cut): zero at and beyond `cut`.
  StepFunction restricted_below(double cut) const {
    if (!(cut > domain_.a()) || cut > domain_.b()) {
      throw DomainError("restriction point must lie in (a, b]");
    }
    if (cut == domain_.b()) {
      return StepFunction(domain_, breakpoints_, values_, 0.0);
    }
    std::vector<double> bps;
    std::vector<double> vals{values_[0]};
    for (std::size_t i = 0; i < breakpoints_.size() && breakpoints_[i] < cut;
         ++i) {
      bps.push_back(breakpoints_[i]);
      vals.push_back(values_[i + 1]);
    }
    bps.push_back(cut);
    vals.push_back(0.0);
    return StepFunction(domain_, std::move(bps), std::move(vals), 0.0);
  }

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  std::size_t count_at_or_below(double x) const {
    return static_cast<std::size_t>(
        std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) -
        breakpoints_.begin());
  }

  std::size_t count_below(double x) const {
    return static_cast<std::size_t>(
        std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x) -
        breakpoints_.begin());
  }

  void canonicalize() {
    if (values_.size() != breakpoints_.size() + 1) {
      throw SpecError("step function needs one more piece value than "
                      "breakpoints (got " +
                      std::to_string(values_.size()) + " values, " +
                      std::to_string(breakpoints_.size()) + " breakpoints)");
    }
    if (!std::isfinite(end_)) throw SpecError("end value must be finite");
    for (double v : values_) {
      if (!std::isfinite(v)) throw SpecError("piece values must be finite");
    }
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
      const double p = breakpoints_[i];
      if (!std::isfinite(p) || !(p > domain_.a()) || p > domain_.b()) {
        throw SpecError("breakpoint " + std::to_string(i) + " = " +
                        std::to_string(p) + " outside (a, b]");
      }
      if (i > 0 && !(breakpoints_[i - 1] < p)) {
        throw SpecError("breakpoints must be strictly increasing (index " +
                        std::to_string(i) + ")");
      }
    }
    if (!breakpoints_.empty() && breakpoints_.back() == domain_.b()) {
      breakpoints_.pop_back();
      values_.pop_back();
    }
    std::vector<double> bps;
    std::vector<double> vals{values_[0]};
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
      if (values_[i + 1] != vals.back()) {
        bps.push_back(breakpoints_[i]);
        vals.push_back(values_[i + 1]);
      }
    }
    breakpoints_ = std::move(bps);
    values_ = std::move(vals);
  }

  Interval domain_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double end_;
};

struct Knot {
  double x;
  double y;

  friend bool operator==(const Knot&, const Knot&) = default;
};

/// Continuous linear interpolant through knots x_0 = a < ... < x_k = b.
class PiecewiseLinear {
 public:
  explicit PiecewiseLinear(std::vector<Knot> knots)
      : knots_(std::move(knots)), domain_(validated_domain(knots_)) {}

  static PiecewiseLinear constant(Interval domain, double value) {
    return PiecewiseLinear({{domain.a(), value}, {domain.b(), value}});
  }

  static PiecewiseLinear zero(Interval domain) { return constant(domain, 0.0); }

  const Interval& interval() const noexcept { return domain_; }
  std::span<const Knot> knots() const noexcept { return knots_; }
  std::size_t segment_count() const noexcept { return knots_.size() - 1; }

  double slope(std::size_t segment) const {
    const auto& l = knots_.at(segment);
    const auto& r = knots_.at(segment + 1);
    return (r.y - l.y) / (r.x - l.x);
  }

  double operator()(double x) const {
    detail::require_point(domain_, x, "linear evaluate");
    const std::size_t i = segment_of(x);
    const auto& l = knots_[i];
    if (x == l.x) return l.y;
    const auto& r = knots_[i + 1];
    if (x == r.x) return r.y;
    return l.y + (x - l.x) * ((r.y - l.y) / (r.x - l.x));
  }

  /// Index i of the segment [x_i, x_{i+1}] holding x (the left one at knots).
  std::size_t segment_of(double x) const {
    auto it = std::upper_bound(
        knots_.begin(), knots_.end(), x,
        [](double v, const Knot& k) { return v < k.x; });
    auto i = static_cast<std::size_t>(it - knots_.begin());
    if (i == 0) return 0;
    return std::min(i - 1, knots_.size() - 2);
  }

  bool is_constant() const noexcept {
    return std::all_of(knots_.begin(), knots_.end(),
                       [&](const Knot& k) { return k.y == knots_[0].y; });
  }

  bool is_zero() const noexcept { return is_constant() && knots_[0].y == 0.0; }

  double max_abs_slope() const {
    double m = 0.0;
    for (std::size_t i = 0; i < segment_count(); ++i) {
      m = std::max(m, std::abs(slope(i)));
    }
    return m;
  }

  /// Abscissae of c, every knot strictly inside (c, d), and d.
  std::vector<double> partition(double c, double d) const {
    detail::require_subinterval(domain_, c, d);
    std::vector<double> pts{c};
    for (const auto& k : knots_) {
      if (k.x > c && k.x < d) pts.push_back(k.x);
    }
    if (d > c) pts.push_back(d);
    return pts;
  }

  double total_variation(double c, double d) const {
    const auto pts = partition(c, d);
    double v = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      v += std::abs((*this)(pts[i]) - (*this)(pts[i - 1]));
    }
    return v;
  }

  double integral(double c, double d) const {
    const auto pts = partition(c, d);
    double s = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      s += 0.5 * (pts[i] - pts[i - 1]) * ((*this)(pts[i]) + (*this)(pts[i - 1]));
    }
    return s;
  }

  /// Exact minimum and maximum over [c, d].
  std::pair<double, double> range(double c, double d) const {
    const auto pts = partition(c, d);
    double lo = (*this)(pts[0]);
    double hi = lo;
    for (double p : pts) {
      const double v = (*this)(p);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return {lo, hi};
  }

  PiecewiseLinear scaled(double k) const {
    auto ks = knots_;
    for (auto& kn : ks) kn.y *= k;
    return PiecewiseLinear(std::move(ks));
  }

  PiecewiseLinear operator-() const { return scaled(-1.0); }

  friend PiecewiseLinear operator+(const PiecewiseLinear& lhs,
                                   const PiecewiseLinear& rhs) {
    if (!(lhs.domain_ == rhs.domain_)) {
      throw SpecError("cannot add linear functions on different intervals");
    }
    std::vector<double> lx;
    std::vector<double> rx;
    for (const auto& k : lhs.knots_) lx.push_back(k.x);
    for (const auto& k : rhs.knots_) rx.push_back(k.x);
    std::vector<Knot> ks;
    for (double x : detail::merge_sorted(lx, rx)) ks.push_back({x, lhs(x) + rhs(x)});
    return PiecewiseLinear(std::move(ks));
  }

  friend PiecewiseLinear operator-(const PiecewiseLinear& lhs,
                                   const PiecewiseLinear& rhs) {
    return lhs + (-rhs);
  }

  friend bool operator==(const PiecewiseLinear& l, const PiecewiseLinear& r) {
    return l.knots_ == r.knots_;
  }

 private:
  static Interval validated_domain(const std::vector<Knot>& ks) {
    if (ks.size() < 2) throw SpecError("piecewise linear needs at least 2 knots");
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (!std::isfinite(ks[i].x) || !std::isfinite(ks[i].y)) {
        throw SpecError("knot " + std::to_string(i) + " is not finite");
      }
      if (i > 0 && !(ks[i - 1].x < ks[i].x)) {
        throw SpecError("knot abscissae must be strictly increasing (index " +
                        std::to_string(i) + ")");
      }
    }
    return Interval(ks.front().x, ks.back().x);
  }

  std::vector<Knot> knots_;
  Interval domain_;
};

/// Pointwise sum of a step part and a continuous piecewise-linear part.
class BVFunction {
 public:
  explicit BVFunction(StepFunction step)
      : step_(std::move(step)), linear_(PiecewiseLinear::zero(step_.interval())) {}

  explicit BVFunction(PiecewiseLinear linear)
      : step_(StepFunction::zero(linear.interval())), linear_(std::move(linear)) {}

  BVFunction(StepFunction step, PiecewiseLinear linear)
      : step_(std::move(step)), linear_(std::move(linear)) {
    if (!(step_.interval() == linear_.interval())) {
      throw SpecError("step and linear parts must share the same interval");
    }
  }

  static BVFunction zero(Interval domain) { return BVFunction(StepFunction::zero(domain)); }

  const Interval& interval() const noexcept { return step_.interval(); }
  const StepFunction& step() const noexcept { return step_; }
  const PiecewiseLinear& linear() const noexcept { return linear_; }

  double operator()(double x) const { return step_(x) + linear_(x); }
  double left_limit(double x) const { return step_.left_limit(x) + linear_(x); }
  double right_limit(double x) const { return step_.right_limit(x) + linear_(x); }

  /// No variation besides jumps.
  bool is_pure_step() const noexcept { return linear_.is_constant(); }
  bool is_continuous() const noexcept { return !step_.has_jumps(); }
  bool is_zero() const noexcept { return step_.is_zero() && linear_.is_zero(); }

  std::vector<Jump> jumps(double c, double d) const { return step_.jumps(c, d); }

  double total_variation(double c, double d) const {
    return step_.total_variation(c, d) + linear_.total_variation(c, d);
  }

  double integral(double c, double d) const {
    return step_.integral(c, d) + linear_.integral(c, d);
  }

  /// a, every breakpoint and knot, and b, ascending without duplicates.
  std::vector<double> structural_points() const {
    std::vector<double> kx;
    for (const auto& k : linear_.knots()) kx.push_back(k.x);
    std::vector<double> bps(step_.breakpoints().begin(), step_.breakpoints().end());
    bps.insert(bps.begin(), interval().a());
    bps.push_back(interval().b());
    return detail::merge_sorted(bps, kx);
  }

  BVFunction scaled(double k) const { return {step_.scaled(k), linear_.scaled(k)}; }
  BVFunction operator-() const { return scaled(-1.0); }

  friend BVFunction operator+(const BVFunction& l, const BVFunction& r) {
    return {l.step_ + r.step_, l.linear_ + r.linear_};
  }
  friend BVFunction operator-(const BVFunction& l, const BVFunction& r) {
    return l + (-r);
  }

  friend bool operator==(const BVFunction&, const BVFunction&) = default;

 private:
  StepFunction step_;
  PiecewiseLinear linear_;
};

inline std::vector<Jump> jumps(const BVFunction& g, double c, double d) {
  return g.jumps(c, d);
}

inline double total_variation(const BVFunction& g, double c, double d) {
  return g.total_variation(c, d);
}

/// Minimal Jordan split g - g(a) = pos - neg with pos, neg non-decreasing.
struct JordanPair {
  BVFunction pos;
  BVFunction neg;
};

inline JordanPair jordan_decompose(const BVFunction& g) {
  const Interval dom = g.interval();
  const StepFunction& s = g.step();

  std::vector<double> bps(s.breakpoints().begin(), s.breakpoints().end());
  std::vector<double> up{0.0};
  std::vector<double> down{0.0};
  for (std::size_t i = 0; i < bps.size(); ++i) {
    const double dj = s.values()[i + 1] - s.values()[i];
    up.push_back(up.back() + std::max(dj, 0.0));
    down.push_back(down.back() + std::max(-dj, 0.0));
  }
  const double ej = s.end_jump();
  const double up_end = up.back() + std::max(ej, 0.0);
  const double down_end = down.back() + std::max(-ej, 0.0);

  std::vector<Knot> rise;
  std::vector<Knot> fall;
  const auto ks = g.linear().knots();
  rise.push_back({ks[0].x, 0.0});
  fall.push_back({ks[0].x, 0.0});
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const double dy = ks[i].y - ks[i - 1].y;
    rise.push_back({ks[i].x, rise.back().y + std::max(dy, 0.0)});
    fall.push_back({ks[i].x, fall.back().y + std::max(-dy, 0.0)});
  }

  return {BVFunction(StepFunction(dom, bps, std::move(up), up_end),
                     PiecewiseLinear(std::move(rise))),
          BVFunction(StepFunction(dom, std::move(bps), std::move(down), down_end),
                     PiecewiseLinear(std::move(fall)))};
}

/// u = f * s for continuous piecewise-linear f and step s, as a BVFunction
/// whose step part carries the jumps f(p) * (s(p) - s(p-)).
inline BVFunction product(const PiecewiseLinear& f, const StepFunction& s) {
  if (!(f.interval() == s.interval())) {
    throw SpecError("product needs a common interval");
  }
  const Interval dom = f.interval();
  std::vector<Jump> js;
  for (const auto& j : s.jumps(dom.a(), dom.b())) {
    js.push_back({j.point, f(j.point) * j.size});
  }
  std::vector<double> kx;
  for (const auto& k : f.knots()) kx.push_back(k.x);
  const std::vector<double> pts = detail::merge_sorted(kx, s.breakpoints());

  std::vector<Knot> ks{{dom.a(), s(dom.a()) * f(dom.a())}};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double level = s.right_limit(pts[i - 1]);
    ks.push_back({pts[i], ks.back().y + level * (f(pts[i]) - f(pts[i - 1]))});
  }
  return {StepFunction::from_jumps(dom, 0.0, std::move(js)),
          PiecewiseLinear(std::move(ks))};
}

}  // namespace rsint
