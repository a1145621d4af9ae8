#pragma once

// Seeded random instances and the invariant suite run by `rsint selftest`.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rsint/bv.hpp"
#include "rsint/counterexample.hpp"
#include "rsint/errors.hpp"
#include "rsint/integrand.hpp"
#include "rsint/positivity.hpp"
#include "rsint/stieltjes.hpp"

namespace rsint {

inline constexpr std::uint64_t default_seed = 20240601;

class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  /// `count` distinct sorted points strictly inside (a, b).
  std::vector<double> interior_points(const Interval& dom, std::size_t count) {
    std::vector<double> xs;
    while (xs.size() < count) {
      const double x = uniform(dom.a(), dom.b());
      if (x > dom.a() && x < dom.b()) xs.push_back(x);
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    }
    return xs;
  }

  PiecewiseLinear pl(const Interval& dom, double lo, double hi, std::size_t max_inner = 6) {
    std::vector<Knot> ks{{dom.a(), uniform(lo, hi)}};
    for (double x : interior_points(dom, index(0, max_inner))) ks.push_back({x, uniform(lo, hi)});
    ks.push_back({dom.b(), uniform(lo, hi)});
    return PiecewiseLinear(std::move(ks));
  }

  StepFunction step(const Interval& dom, double lo, double hi, std::size_t max_jumps = 8) {
    const auto bps = interior_points(dom, index(1, max_jumps));
    std::vector<double> vals{uniform(lo, hi)};
    for (std::size_t i = 0; i < bps.size(); ++i) vals.push_back(uniform(lo, hi));
    return StepFunction(dom, bps, std::move(vals), uniform(lo, hi));
  }

  /// Step g >= 0 with g(a) = 0, some pieces zero, not identically zero.
  StepFunction nonneg_step(const Interval& dom, std::size_t max_jumps = 8) {
    for (;;) {
      const auto bps = interior_points(dom, index(1, max_jumps));
      std::vector<double> vals{0.0};
      for (std::size_t i = 0; i < bps.size(); ++i) vals.push_back(coin(0.3) ? 0.0 : uniform(0, 1));
      const double end = coin(0.3) ? 0.0 : uniform(0, 1);
      StepFunction s(dom, bps, std::move(vals), end);
      if (!s.is_zero()) return s;
    }
  }

  BVFunction bv(const Interval& dom) {
    return BVFunction(step(dom, -1.0, 1.0), pl(dom, -1.0, 1.0));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct PropertyReport {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  /// Smallest observed (allowed - actual) over all cases.
  double worst_margin = INFINITY;

  bool passed() const { return cases > 0 && failures == 0; }

  void record(bool ok, double margin, const std::string& what) {
    ++cases;
    worst_margin = std::min(worst_margin, margin);
    if (!ok) {
      if (failures == 0) first_failure = what;
      ++failures;
    }
  }
};

inline double tau(double v, double scale = 1e-12) { return slack(v, scale); }

/// ∫ f dg + ∫ g df = f(y)g(y) - f(a)g(a) for PL f and step + PL g.
inline PropertyReport ibp_property(std::uint64_t seed, std::size_t count = 1000) {
  PropertyReport rep{.name = "integration by parts"};
  InstanceGenerator gen(seed);
  const Interval dom(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const PiecewiseLinear f = gen.pl(dom, -2.0, 2.0);
    const BVFunction g = gen.bv(dom);
    const double y = gen.coin(0.2) ? 1.0 : gen.uniform(0.01, 1.0);
    const auto r = integration_by_parts(f, g, y);
    const double scale = std::abs(r.int_f_dg) + std::abs(r.int_g_df) + std::abs(r.boundary);
    const double allowed = r.bound + tau(scale, 1e-12);
    rep.record(r.residual <= allowed, allowed - r.residual,
               "case " + std::to_string(i) + " residual " + std::to_string(r.residual));
  }
  return rep;
}

/// Additivity of total variation and the Jordan split invariants.
inline PropertyReport jordan_property(std::uint64_t seed, std::size_t count = 100,
                                      std::size_t splits = 100) {
  PropertyReport rep{.name = "total variation / Jordan"};
  InstanceGenerator gen(seed);
  const Interval dom(-1.0, 2.0);
  for (std::size_t i = 0; i < count; ++i) {
    const BVFunction g = gen.bv(dom);
    const double total = g.total_variation(dom.a(), dom.b());
    double worst = 0.0;
    for (std::size_t k = 0; k < splits; ++k) {
      const double c = gen.uniform(dom.a(), dom.b());
      worst = std::max(worst, std::abs(g.total_variation(dom.a(), c) +
                                       g.total_variation(c, dom.b()) - total));
    }
    const JordanPair jp = jordan_decompose(g);
    bool monotone = jp.pos(dom.a()) == 0.0 && jp.neg(dom.a()) == 0.0;
    for (const auto* part : {&jp.pos, &jp.neg}) {
      for (const auto& j : part->jumps(dom.a(), dom.b())) monotone = monotone && j.size >= 0.0;
      for (std::size_t s = 0; s < part->linear().segment_count(); ++s) {
        monotone = monotone && part->linear().slope(s) >= 0.0;
      }
    }
    auto pts = g.structural_points();
    for (std::size_t k = 0; k < 20; ++k) pts.push_back(gen.uniform(dom.a(), dom.b()));
    for (double x : pts) {
      worst = std::max(worst, std::abs(g(x) - g(dom.a()) - (jp.pos(x) - jp.neg(x))));
    }
    worst = std::max(worst, std::abs(jp.pos(dom.b()) + jp.neg(dom.b()) - total));
    const double allowed = tau(total, 1e-12);
    rep.record(monotone && worst <= allowed, allowed - worst,
               "case " + std::to_string(i) + (monotone ? " defect " : " non-monotone part ") +
                   std::to_string(worst));
  }
  return rep;
}

/// f for oracle comparisons: a PL function or sin(k x) + 2 with Lipschitz k.
inline IntegrandSpec random_integrand(InstanceGenerator& gen, const Interval& dom) {
  if (gen.coin()) return IntegrandSpec(gen.pl(dom, -2.0, 2.0));
  const double k = gen.uniform(0.5, 4.0);
  using K = Expr::Kind;
  const Expr e = Expr::binary(
      K::Add,
      Expr::unary(K::Sin, Expr::binary(K::Multiply, Expr::number(k), Expr::variable())),
      Expr::number(2.0));
  return IntegrandSpec(e, dom, Lipschitz{k});
}

/// |rs_bv - rs_bruteforce_oracle(mesh)| <= sum of both bounds.
inline PropertyReport oracle_property(std::uint64_t seed, std::size_t count = 200,
                                      double mesh = 1e-4) {
  PropertyReport rep{.name = "oracle agreement"};
  InstanceGenerator gen(seed);
  const Interval dom(0.0, 1.0);
  QuadratureOptions opts;
  opts.tol = 1e-6;
  for (std::size_t i = 0; i < count; ++i) {
    const IntegrandSpec f = random_integrand(gen, dom);
    const BVFunction g = gen.bv(dom);
    const double y = gen.uniform(0.05, 1.0);
    const auto r = rs_bv(f, g, y, opts);
    const auto o = rs_bruteforce_oracle(f, g, y, mesh);
    const double diff = std::abs(r.value - o.value);
    const double allowed = r.error_bound + o.error_bound + tau(r.value);
    rep.record(diff <= allowed && r.certified && o.certified, allowed - diff,
               "case " + std::to_string(i) + " difference " + std::to_string(diff));
  }
  return rep;
}

/// |∫ g df| <= ∫ f g dmu for PL f > 0 and step g >= 0.
inline PropertyReport gdf_property(std::uint64_t seed, std::size_t count = 500) {
  PropertyReport rep{.name = "gdf bound"};
  InstanceGenerator gen(seed);
  const Interval dom(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const PiecewiseLinear f = gen.pl(dom, 0.1, 3.0);
    const BVFunction g(gen.nonneg_step(dom));
    const double y = gen.uniform(0.01, 1.0);
    const auto [lhs, rhs] = gdf_bound_check(f, g, y);
    const double allowed = rhs + tau(rhs);
    rep.record(lhs <= allowed, allowed - lhs,
               "case " + std::to_string(i) + " lhs " + std::to_string(lhs) + " rhs " +
                   std::to_string(rhs));
  }
  return rep;
}

/// Either the hypothesis u(y) <= ∫_{[a,y)} u dmu fails at a reported point,
/// or u <= strictness everywhere.
inline PropertyReport gronwall_property(std::uint64_t seed, std::size_t count = 100,
                                        double strictness = 1e-12) {
  PropertyReport rep{.name = "Gronwall dichotomy"};
  InstanceGenerator gen(seed);
  const Interval dom(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const PiecewiseLinear f = gen.pl(dom, 0.1, 3.0);
    const WeightedMeasure mu(variation_measure(f), f);
    BVFunction u = BVFunction::zero(dom);
    switch (i % 4) {
      case 0: break;
      case 1: u = product(f, gen.nonneg_step(dom)); break;
      case 2: {
        // Continuous rise from zero.
        const double x0 = gen.uniform(0.0, 0.9);
        u = BVFunction(PiecewiseLinear({{0.0, 0.0}, {x0, 0.0}, {1.0, gen.uniform(0.1, 1.0)}}));
        break;
      }
      default: u = product(f, gen.nonneg_step(dom)).scaled(gen.uniform(1e-3, 1.0));
    }
    const auto r = gronwall_verify(u, mu, strictness);
    const bool ok = (r.outcome == GronwallOutcome::HypothesisViolated && r.at.has_value()) ||
                    (r.outcome == GronwallOutcome::ConclusionHolds);
    const bool expected_zero = i % 4 == 0;
    const bool consistent = expected_zero == (r.outcome == GronwallOutcome::ConclusionHolds);
    rep.record(ok && consistent, ok && consistent ? 1.0 : -1.0,
               "case " + std::to_string(i) + " outcome " + to_string(r.outcome));
  }
  return rep;
}

/// Positivity search on random pure-step instances: a witness always exists, it
/// re-verifies, and every returned interval re-verifies at 10 interior points.
inline PropertyReport witness_property(std::uint64_t seed, std::size_t count = 500) {
  PropertyReport rep{.name = "positivity witnesses"};
  InstanceGenerator gen(seed);
  const Interval dom(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const IntegrandSpec f(gen.pl(dom, 0.1, 3.0));
    const BVFunction g(gen.nonneg_step(dom));
    std::string what = "case " + std::to_string(i);
    double margin = INFINITY;
    bool ok = true;
    try {
      PositivityWitness w = find_positive_y(f, g);
      const auto r = rs_jump_exact(f, g.step(), w.y);
      margin = r.value - r.error_bound;
      ok = margin > 0.0 && r.value - r.error_bound >= w.lower_bound - tau(w.lower_bound);
      if (ok && w.y < dom.b()) {
        const Interval iv = positive_interval(f, g, w);
        for (int k = 1; k <= 10; ++k) {
          const double y = iv.a() + iv.length() * k / 11.0;
          const double v = rs_jump_exact(f, g.step(), y).value;
          margin = std::min(margin, v - 0.5 * w.lower_bound);
          ok = ok && v >= 0.5 * w.lower_bound - tau(v) && v > 0.0;
        }
      }
      if (!ok) what += " re-verification failed at y = " + std::to_string(w.y);
    } catch (const Error& e) {
      ok = false;
      margin = -INFINITY;
      what += std::string(": ") + e.what();
    }
    rep.record(ok, margin, what);
  }
  return rep;
}

/// Counterexample for the oscillating example with gamma = 1/2, beta = 3/2, N = 1000.
inline PropertyReport counterexample_property() {
  PropertyReport rep{.name = "counterexample certificate"};
  const Example1 ex = example1_family(0.5);
  CounterexampleOptions opts;
  opts.forced_n0 = 7;
  opts.f_sup = ex.f_sup;
  const auto ce = build_counterexample(ex.f, ex.family, 1.5, 1000, opts);
  bool ok = ce.certificate.verdict && ce.certificate.empirical_threshold <= 7;
  for (std::size_t n = 7; n <= 1000; ++n) ok = ok && ce.certificate.records[n - 1].negative;
  rep.record(ok, ok ? -ce.certificate.max_step_value : -1.0,
             "verdict " + std::string(ce.certificate.verdict ? "true" : "false"));
  return rep;
}

inline std::vector<PropertyReport> run_selftest(std::uint64_t seed) {
  return {jordan_property(seed),        ibp_property(seed + 1), oracle_property(seed + 2),
          gdf_property(seed + 3),       gronwall_property(seed + 4),
          witness_property(seed + 5),  counterexample_property()};
}

}  // namespace rsint
