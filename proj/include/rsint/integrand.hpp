#pragma once

// Continuous integrands with declared moduli of continuity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "rsint/bv.hpp"
#include "rsint/errors.hpp"
#include "rsint/expr.hpp"

namespace rsint {

/// omega(delta) = constant * delta.
struct Lipschitz {
  double constant = 0.0;
};

/// omega(delta) = constant * delta^exponent, exponent in (0, 1].
struct Hoelder {
  double constant = 0.0;
  double exponent = 1.0;
};

/// Empirical oscillation on a dense grid times a safety factor. Heuristic:
/// never upgrades a result to certified.
struct Sampled {
  std::size_t resolution = 100000;
  double safety_factor = 1.5;
};

using ModulusDescriptor = std::variant<Lipschitz, Hoelder, Sampled>;

inline bool is_heuristic(const ModulusDescriptor& m) {
  return std::holds_alternative<Sampled>(m);
}

inline void validate(const ModulusDescriptor& m) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Lipschitz>) {
          if (!(d.constant >= 0.0) || !std::isfinite(d.constant)) {
            throw SpecError("Lipschitz constant must be finite and >= 0");
          }
        } else if constexpr (std::is_same_v<T, Hoelder>) {
          if (!(d.constant >= 0.0) || !std::isfinite(d.constant)) {
            throw SpecError("Hoelder constant must be finite and >= 0");
          }
          if (!(d.exponent > 0.0 && d.exponent <= 1.0)) {
            throw SpecError("Hoelder exponent must lie in (0, 1]");
          }
        } else {
          if (d.resolution < 2) throw SpecError("sampled resolution must be >= 2");
          if (!(d.safety_factor >= 1.0)) throw SpecError("safety factor must be >= 1");
        }
      },
      m);
}

struct RemovableValue {
  double point;
  double value;
};

/// A continuous integrand on a closed interval.
///
/// The body is an expression, optionally with a declared removable value at
/// one point, and optionally a piecewise-linear cover: on the cover's interval
/// f is the cover's interpolant. A cover spanning the whole domain makes f a
/// pure piecewise-linear function.
class IntegrandSpec {
 public:
  IntegrandSpec(Expr expr, Interval domain,
                std::optional<ModulusDescriptor> modulus = std::nullopt,
                std::optional<RemovableValue> fill = std::nullopt)
      : expr_(std::move(expr)), domain_(domain), fill_(fill) {
    if (fill_ && !domain_.contains(fill_->point)) {
      throw SpecError("removable point lies outside the domain");
    }
    if (fill_ && !std::isfinite(fill_->value)) throw SpecError("removable value must be finite");
    if (modulus) {
      modulus_ = *modulus;
    } else if (!expr_->depends_on_x()) {
      modulus_ = Lipschitz{0.0};
    } else {
      modulus_ = Sampled{};
    }
    validate(modulus_);
    if (!expr_->depends_on_x() && !fill_) {
      cover_ = PiecewiseLinear::constant(domain_, evaluate(*expr_, domain_.a()));
    }
  }

  explicit IntegrandSpec(PiecewiseLinear linear)
      : domain_(linear.interval()),
        cover_(std::move(linear)),
        modulus_(Lipschitz{cover_->max_abs_slope()}) {}

  /// Declares that f coincides with `cover` on the cover's interval. The
  /// glue points must agree with the expression to keep f continuous.
  IntegrandSpec with_linear_cover(PiecewiseLinear cover) const {
    if (!expr_) throw SpecError("a linear cover needs an expression body");
    if (!domain_.contains(cover.interval())) {
      throw SpecError("linear cover must lie inside the domain");
    }
    IntegrandSpec out = *this;
    out.cover_.reset();
    for (double p : {cover.interval().a(), cover.interval().b()}) {
      if (p == domain_.a() || p == domain_.b()) continue;
      const double outside = out(p);
      if (std::abs(outside - cover(p)) > slack(outside)) {
        throw SpecError("linear cover is discontinuous with the expression at x = " +
                        std::to_string(p));
      }
    }
    out.cover_ = std::move(cover);
    return out;
  }

  const Interval& domain() const noexcept { return domain_; }
  const ModulusDescriptor& modulus() const noexcept { return modulus_; }
  const std::optional<Expr>& expression() const noexcept { return expr_; }
  const std::optional<PiecewiseLinear>& linear_cover() const noexcept { return cover_; }
  const std::optional<RemovableValue>& removable() const noexcept { return fill_; }

  bool is_heuristic() const { return !is_piecewise_linear() && rsint::is_heuristic(modulus_); }

  bool is_piecewise_linear() const noexcept {
    return cover_.has_value() && cover_->interval() == domain_;
  }

  /// True when f is given by the linear cover on all of [c, d].
  bool linear_on(double c, double d) const noexcept {
    return cover_ && cover_->interval().a() <= c && d <= cover_->interval().b();
  }

  double operator()(double x) const {
    detail::require_point(domain_, x, "integrand");
    if (cover_ && cover_->interval().contains(x)) return (*cover_)(x);
    if (fill_ && x == fill_->point) return fill_->value;
    return evaluate(*expr_, x);
  }

 private:
  std::optional<Expr> expr_;
  Interval domain_;
  std::optional<RemovableValue> fill_;
  std::optional<PiecewiseLinear> cover_;
  ModulusDescriptor modulus_ = Lipschitz{0.0};
};

inline double eval_expr(const IntegrandSpec& f, double x) { return f(x); }

/// Upper estimates of omega_f(delta) = sup{|f(u) - f(v)| : |u - v| <= delta}.
///
/// Sampled descriptors evaluate f once on a grid of 2 * resolution + 1
/// points (the base grid and its half-step shift) and answer every later
/// query with a sliding-window oscillation over that grid.
class ModulusEstimator {
 public:
  explicit ModulusEstimator(const IntegrandSpec& f) : f_(f) {}

  double operator()(double delta) const {
    if (!(delta > 0.0)) throw DomainError("modulus needs delta > 0");
    delta = std::min(delta, f_.domain().length());
    if (f_.is_piecewise_linear()) return f_.linear_cover()->max_abs_slope() * delta;
    double cover_part = 0.0;
    if (f_.linear_cover()) cover_part = f_.linear_cover()->max_abs_slope() * delta;
    return cover_part +
           std::visit(
               [&](const auto& d) -> double {
                 using T = std::decay_t<decltype(d)>;
                 if constexpr (std::is_same_v<T, Lipschitz>) {
                   return d.constant * delta;
                 } else if constexpr (std::is_same_v<T, Hoelder>) {
                   return d.constant * std::pow(delta, d.exponent);
                 } else {
                   return sampled(d, delta);
                 }
               },
               f_.modulus());
  }

  /// Bound for (1/h) ∫ |f(x) - f(midpoint)| dx over a cell of width h. For
  /// omega(t) = C t^alpha this is omega(h/2) / (1 + alpha).
  double cell_error(double h) const {
    const double r = 0.5 * h;
    if (f_.is_piecewise_linear()) return 0.5 * (*this)(r);
    double cover_part = 0.0;
    if (f_.linear_cover()) cover_part = 0.5 * f_.linear_cover()->max_abs_slope() * r;
    return cover_part + std::visit(
                            [&](const auto& d) -> double {
                              using T = std::decay_t<decltype(d)>;
                              if constexpr (std::is_same_v<T, Lipschitz>) {
                                return 0.5 * d.constant * r;
                              } else if constexpr (std::is_same_v<T, Hoelder>) {
                                return d.constant * std::pow(r, d.exponent) / (1.0 + d.exponent);
                              } else {
                                return sampled(d, r);
                              }
                            },
                            f_.modulus());
  }

  bool heuristic() const { return f_.is_heuristic(); }

 private:
  double sampled(const Sampled& d, double delta) const {
    const std::size_t n = 2 * d.resolution;
    const double a = f_.domain().a();
    const double len = f_.domain().length();
    if (samples_.empty()) {
      samples_.resize(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        samples_[i] = f_(a + len * (static_cast<double>(i) / static_cast<double>(n)));
      }
    }
    const double h = len / static_cast<double>(n);
    // Below the grid spacing the grid cannot resolve anything; clamp.
    const auto width = static_cast<std::size_t>(std::floor(std::max(delta, h) / h));
    std::deque<std::size_t> hi;
    std::deque<std::size_t> lo;
    double best = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      while (!hi.empty() && samples_[hi.back()] <= samples_[j]) hi.pop_back();
      while (!lo.empty() && samples_[lo.back()] >= samples_[j]) lo.pop_back();
      hi.push_back(j);
      lo.push_back(j);
      const std::size_t left = j >= width ? j - width : 0;
      while (hi.front() < left) hi.pop_front();
      while (lo.front() < left) lo.pop_front();
      best = std::max(best, samples_[hi.front()] - samples_[lo.front()]);
    }
    return best * d.safety_factor;
  }

  const IntegrandSpec& f_;
  mutable std::vector<double> samples_;
};

inline double estimate_modulus(const IntegrandSpec& f, double delta) {
  if (!(delta > 0.0) || delta > f.domain().length()) {
    throw DomainError("modulus needs 0 < delta <= b - a");
  }
  return ModulusEstimator(f)(delta);
}

/// Lower and upper bounds for f over a subinterval.
struct RangeBounds {
  double min_sample;
  double max_sample;
  double lower;
  double upper;
  bool certified;
};

inline RangeBounds range_bounds(const IntegrandSpec& f, double c, double d,
                                std::size_t grid_size = 4097) {
  detail::require_subinterval(f.domain(), c, d);
  if (f.linear_on(c, d)) {
    const auto [lo, hi] = f.linear_cover()->range(c, d);
    return {lo, hi, lo, hi, true};
  }
  if (grid_size < 2) throw DomainError("grid needs at least 2 points");
  double lo = f(c);
  double hi = lo;
  for (std::size_t i = 1; i < grid_size; ++i) {
    const double t = c + (d - c) * (static_cast<double>(i) / static_cast<double>(grid_size - 1));
    const double v = f(t);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double mesh = (d - c) / static_cast<double>(grid_size - 1);
  const double w = mesh > 0.0 ? ModulusEstimator(f)(mesh) : 0.0;
  return {lo, hi, lo - w, hi + w, !f.is_heuristic()};
}

struct PositivityCheck {
  double min_sample;
  double lower_bound;
  bool certified;
};

/// Minimum of f on a uniform grid with endpoints; certified only when a
/// non-heuristic modulus proves min f >= min_sample - omega(mesh) > 0.
inline PositivityCheck check_positive(const IntegrandSpec& f, std::size_t grid_size) {
  if (grid_size < 2) throw DomainError("grid needs at least 2 points");
  const auto r = range_bounds(f, f.domain().a(), f.domain().b(), grid_size);
  return {r.min_sample, r.lower, r.certified && r.lower > 0.0};
}

/// Sum of |f(t_{i+1}) - f(t_i)| over `intervals` equal subintervals of [c, d].
/// A lower bound for the total variation; refining by an integer factor never
/// decreases it.
inline double sampled_total_variation(const IntegrandSpec& f, double c, double d,
                                      std::size_t intervals) {
  detail::require_subinterval(f.domain(), c, d);
  if (intervals < 1) throw DomainError("partition needs at least one subinterval");
  double prev = f(c);
  double total = 0.0;
  for (std::size_t i = 1; i <= intervals; ++i) {
    const double t = i == intervals
                         ? d
                         : c + (d - c) * (static_cast<double>(i) / static_cast<double>(intervals));
    const double v = f(t);
    total += std::abs(v - prev);
    prev = v;
  }
  return total;
}

}  // namespace rsint
