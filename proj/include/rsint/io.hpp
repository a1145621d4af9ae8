#pragma once

// JSON integrator documents, certificate and witness records, CSV helpers.
//
// Integrator documents are tagged unions:
//   {"type": "step", "interval": [a, b], "breakpoints": [...],
//    "piece_values": [...], "end_value": v}
//   {"type": "piecewise_linear", "knots": [[x, y], ...]}
//   {"type": "sum", "parts": [doc, ...]}
//   {"type": "theorem2", "gamma": g, "beta": b, "truncation": N, "n0": k}

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rsint/bv.hpp"
#include "rsint/counterexample.hpp"
#include "rsint/errors.hpp"
#include "rsint/positivity.hpp"
#include "rsint/stieltjes.hpp"

namespace rsint {

using json = nlohmann::json;

/// Shortest round-trip decimal form, independent of the global locale.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

namespace detail {

class DocReader {
 public:
  explicit DocReader(std::string base = "") : base_(std::move(base)) {}

  [[noreturn]] void fail(const std::string& what, const std::string& sub = "") const {
    throw DocumentError(what, base_ + sub);
  }

  const json& member(const json& obj, const char* key) const {
    if (!obj.is_object()) fail("expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(std::string("missing field '") + key + "'");
    return *it;
  }

  double number(const json& v, const std::string& sub) const {
    if (!v.is_number()) fail("expected a number", sub);
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail("number must be finite", sub);
    return d;
  }

  std::vector<double> numbers(const json& v, const std::string& sub) const {
    if (!v.is_array()) fail("expected an array of numbers", sub);
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(number(v[i], sub + "/" + std::to_string(i)));
    }
    return out;
  }

  std::size_t count(const json& v, const std::string& sub) const {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail("expected a non-negative integer", sub);
    }
    return v.get<std::size_t>();
  }

  DocReader at(const std::string& sub) const { return DocReader(base_ + sub); }

 private:
  std::string base_;
};

template <class Make>
auto checked(const DocReader& r, const std::string& sub, Make make) {
  try {
    return make();
  } catch (const SpecError& e) {
    r.fail(e.what(), sub);
  } catch (const DomainError& e) {
    r.fail(e.what(), sub);
  }
}

}  // namespace detail

struct Theorem2Spec {
  double gamma;
  double beta;
  std::size_t truncation;
  std::optional<std::size_t> n0;
};

/// Builds the integrator described by `doc`; every violated invariant is
/// reported with a JSON pointer to the offending value.
inline BVFunction integrator_from_json(const json& doc, const std::string& pointer = "") {
  const detail::DocReader r(pointer);
  const json& type = r.member(doc, "type");
  if (!type.is_string()) r.fail("'type' must be a string", "/type");
  const std::string t = type.get<std::string>();

  if (t == "step") {
    const auto iv = r.numbers(r.member(doc, "interval"), "/interval");
    if (iv.size() != 2) r.fail("interval needs exactly two numbers", "/interval");
    const Interval dom = detail::checked(r, "/interval", [&] { return Interval(iv[0], iv[1]); });
    auto bps = r.numbers(r.member(doc, "breakpoints"), "/breakpoints");
    auto vals = r.numbers(r.member(doc, "piece_values"), "/piece_values");
    const double end = r.number(r.member(doc, "end_value"), "/end_value");
    for (std::size_t i = 0; i < bps.size(); ++i) {
      const std::string sub = "/breakpoints/" + std::to_string(i);
      if (!(bps[i] > dom.a()) || bps[i] > dom.b()) r.fail("breakpoint outside (a, b]", sub);
      if (i > 0 && !(bps[i - 1] < bps[i])) r.fail("breakpoints must increase strictly", sub);
    }
    if (vals.size() != bps.size() + 1) {
      r.fail("piece_values needs one more entry than breakpoints", "/piece_values");
    }
    return detail::checked(r, "", [&] {
      return BVFunction(StepFunction(dom, std::move(bps), std::move(vals), end));
    });
  }
  if (t == "piecewise_linear") {
    const json& ks = r.member(doc, "knots");
    if (!ks.is_array()) r.fail("knots must be an array", "/knots");
    std::vector<Knot> knots;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const std::string sub = "/knots/" + std::to_string(i);
      const auto xy = r.numbers(ks[i], sub);
      if (xy.size() != 2) r.fail("knot must be [x, y]", sub);
      if (i > 0 && !(knots.back().x < xy[0])) r.fail("knot abscissae must increase strictly", sub);
      knots.push_back({xy[0], xy[1]});
    }
    if (knots.size() < 2) r.fail("at least two knots are required", "/knots");
    return detail::checked(r, "/knots",
                           [&] { return BVFunction(PiecewiseLinear(std::move(knots))); });
  }
  if (t == "sum") {
    const json& parts = r.member(doc, "parts");
    if (!parts.is_array() || parts.empty()) r.fail("parts must be a non-empty array", "/parts");
    std::optional<BVFunction> acc;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const std::string sub = "/parts/" + std::to_string(i);
      BVFunction part = integrator_from_json(parts[i], pointer + sub);
      if (acc && !(acc->interval() == part.interval())) {
        r.fail("parts must share the interval", sub);
      }
      acc = acc ? *acc + part : part;
    }
    return *acc;
  }
  if (t == "theorem2") {
    const double gamma = r.number(r.member(doc, "gamma"), "/gamma");
    const double beta = r.number(r.member(doc, "beta"), "/beta");
    const std::size_t n = r.count(r.member(doc, "truncation"), "/truncation");
    if (!(gamma > 0.0 && gamma < 1.0)) r.fail("gamma must lie in (0, 1)", "/gamma");
    if (!(beta > 1.0)) r.fail("beta must exceed 1", "/beta");
    if (n < 1) r.fail("truncation must be >= 1", "/truncation");
    CounterexampleOptions opts;
    if (doc.contains("n0")) {
      opts.forced_n0 = r.count(doc["n0"], "/n0");
      if (*opts.forced_n0 < 1 || *opts.forced_n0 > n) r.fail("n0 must lie in 1..N", "/n0");
    }
    const Example1 ex = example1_family(gamma);
    opts.f_sup = ex.f_sup;
    return BVFunction(build_counterexample(ex.f, ex.family, beta, n, opts).g);
  }
  r.fail("unknown integrator type '" + t + "'", "/type");
}

inline json to_json(const StepFunction& s) {
  return {{"type", "step"},
          {"interval", {s.interval().a(), s.interval().b()}},
          {"breakpoints", std::vector<double>(s.breakpoints().begin(), s.breakpoints().end())},
          {"piece_values", std::vector<double>(s.values().begin(), s.values().end())},
          {"end_value", s.end_value()}};
}

inline json to_json(const PiecewiseLinear& p) {
  json ks = json::array();
  for (const auto& k : p.knots()) ks.push_back({k.x, k.y});
  return {{"type", "piecewise_linear"}, {"knots", std::move(ks)}};
}

/// Canonical document: a single part when the other one vanishes.
inline json to_json(const BVFunction& g) {
  const bool lin = !g.linear().is_zero();
  const bool step = !g.step().is_zero() || !lin;
  if (step && lin) {
    return {{"type", "sum"}, {"parts", {to_json(g.step()), to_json(g.linear())}}};
  }
  return lin ? to_json(g.linear()) : to_json(g.step());
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON in ") + path, e.byte);
  }
}

inline BVFunction load_integrator(const std::string& path) {
  return integrator_from_json(read_json_file(path));
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path + " failed");
}

inline json to_json(const IntegralResult& r) {
  return {{"value", r.value}, {"error_bound", r.error_bound}, {"certified", r.certified}};
}

inline json to_json(const Certificate& c, const CounterexampleParams& p) {
  json records = json::array();
  for (const auto& e : c.records) {
    records.push_back({{"n", e.n},
                       {"partial_integral", e.partial_integral},
                       {"tail_lower_bound", e.tail_lower_bound},
                       {"upper_bound", e.upper_bound},
                       {"negative", e.negative}});
  }
  json out = {{"beta", p.beta},
              {"truncation", p.truncation},
              {"n0", p.n0},
              {"empirical_threshold", c.empirical_threshold},
              {"certified_threshold", nullptr},
              {"f_sup", nullptr},
              {"family_verified", c.family_verified},
              {"tail_correction", c.tail_correction},
              {"step_values_checked", c.step_values_checked},
              {"max_step_value", c.max_step_value},
              {"numeric_ok", c.numeric_ok},
              {"analytic_ok", c.analytic_ok},
              {"first_failure", nullptr},
              {"truncation_note", c.truncation_note},
              {"verdict", c.verdict},
              {"records", std::move(records)}};
  if (c.certified_threshold) out["certified_threshold"] = *c.certified_threshold;
  if (c.f_sup) out["f_sup"] = *c.f_sup;
  if (c.first_failure) out["first_failure"] = *c.first_failure;
  return out;
}

inline json to_json(const PositivityWitness& w) {
  json out = {{"y", w.y},
              {"lower_bound", w.lower_bound},
              {"method", to_string(w.method)},
              {"value", w.value},
              {"error_bound", w.error_bound}};
  if (w.interval) out["interval"] = {w.interval->a(), w.interval->b()};
  if (w.epsilon) out["epsilon"] = *w.epsilon;
  return out;
}

}  // namespace rsint
