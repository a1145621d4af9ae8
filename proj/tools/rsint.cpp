// rsint: Riemann-Stieltjes integration, counterexample certificates and
// positivity witnesses from the command line.
//
// Exit codes: 0 ok, 1 selftest failure, 2 parse/validation, 3 evaluation,
// 4 threshold or verdict false, 5 I/O, 6 precondition.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsint/rsint.hpp"

namespace {

using namespace rsint;

enum Exit : int {
  kOk = 0,
  kSelftest = 1,
  kParse = 2,
  kEval = 3,
  kThreshold = 4,
  kIo = 5,
  kPrecondition = 6,
};

struct IntegrandFlags {
  std::string expr;
  std::string pl_file;
  std::optional<double> lipschitz;
  std::vector<double> hoelder;
  std::vector<double> fill;
};

void add_integrand_flags(CLI::App* cmd, IntegrandFlags& fl) {
  cmd->add_option("--f", fl.expr, "integrand expression in x");
  cmd->add_option("--f-pl", fl.pl_file, "piecewise-linear integrand (JSON knots document)");
  cmd->add_option("--lipschitz", fl.lipschitz, "declared Lipschitz constant of --f");
  cmd->add_option("--hoelder", fl.hoelder, "declared Hoelder constant and exponent of --f")
      ->expected(2);
  cmd->add_option("--fill", fl.fill, "removable value: point and value")->expected(2);
}

IntegrandSpec make_integrand(const IntegrandFlags& fl, const Interval& dom) {
  std::optional<PiecewiseLinear> pl;
  if (!fl.pl_file.empty()) {
    const BVFunction doc = load_integrator(fl.pl_file);
    if (!doc.step().is_zero()) throw SpecError("--f-pl must be a piecewise_linear document");
    pl = doc.linear();
  }
  if (fl.expr.empty()) {
    if (!pl) throw SpecError("one of --f or --f-pl is required");
    if (!pl->interval().contains(dom)) throw SpecError("--f-pl must cover the integrator interval");
    return IntegrandSpec(*pl);
  }
  std::optional<ModulusDescriptor> mod;
  if (fl.lipschitz) mod = Lipschitz{*fl.lipschitz};
  if (!fl.hoelder.empty()) mod = Hoelder{fl.hoelder[0], fl.hoelder[1]};
  std::optional<RemovableValue> fill;
  if (!fl.fill.empty()) fill = RemovableValue{fl.fill[0], fl.fill[1]};
  IntegrandSpec f(parse(fl.expr), dom, mod, fill);
  return pl ? f.with_linear_cover(*pl) : f;
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_integrate(const IntegrandFlags& fl, const std::string& g_file, double y, double tol,
                  std::size_t grid, const std::string& out) {
  const BVFunction g = load_integrator(g_file);
  const IntegrandSpec f = make_integrand(fl, g.interval());
  QuadratureOptions opts;
  opts.tol = tol;
  if (grid == 0) {
    print_json(to_json(rs_bv(f, g, y, opts)));
    return kOk;
  }
  const double a = g.interval().a();
  std::vector<double> ys;
  for (std::size_t i = 1; i <= grid; ++i) {
    ys.push_back(i == grid ? y : a + (y - a) * (static_cast<double>(i) / static_cast<double>(grid)));
  }
  const IntegralCurve J = curve(f, g, ys, opts);
  std::ostringstream csv;
  csv << "# certified=" << (J.certified ? "true" : "false") << '\n' << "y,J,flag,error_bound\n";
  for (const auto& p : J.points) {
    csv << format_double(p.y) << ',' << format_double(p.value) << ','
        << (p.kind == PointKind::Jump ? "jump" : "grid") << ',' << format_double(p.error_bound)
        << '\n';
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(out, csv.str());
  }
  return kOk;
}

int cmd_counterexample(double gamma, double beta, std::size_t N, std::optional<std::size_t> n0,
                       std::optional<double> f_sup, const std::string& out,
                       const std::string& out_g) {
  if (!(beta > 1.0)) throw DomainError("beta must exceed 1");
  if (N < 1) throw DomainError("N must be >= 1");
  const Example1 ex = example1_family(gamma);
  CounterexampleOptions opts;
  opts.forced_n0 = n0;
  opts.f_sup = f_sup.value_or(ex.f_sup);
  const Counterexample ce = build_counterexample(ex.f, ex.family, beta, N, opts);
  const Certificate& c = ce.certificate;
  json cert = to_json(c, ce.params);
  cert["gamma"] = gamma;
  cert["alpha"] = ex.family.alpha;
  if (!out.empty()) write_text_file(out, cert.dump(2) + "\n");
  if (!out_g.empty()) write_text_file(out_g, to_json(BVFunction(ce.g)).dump(2) + "\n");
  std::size_t neg_from_n0 = 0;
  for (std::size_t n = ce.params.n0; n <= N; ++n) neg_from_n0 += c.records[n - 1].negative;
  std::cout << "empirical_threshold " << c.empirical_threshold << '\n'
            << "n0 " << ce.params.n0 << ' '
            << (neg_from_n0 == N - ce.params.n0 + 1 ? "valid" : "invalid") << '\n'
            << "certified_threshold "
            << (c.certified_threshold ? std::to_string(*c.certified_threshold) : "none") << '\n'
            << "tail_correction " << format_double(c.tail_correction) << '\n'
            << "step_values_checked " << c.step_values_checked << '\n'
            << "max_step_value " << format_double(c.max_step_value) << '\n'
            << "verdict " << (c.verdict ? "true" : "false") << '\n';
  if (c.first_failure) std::cout << "first_failure " << format_double(*c.first_failure) << '\n';
  return c.verdict ? kOk : kThreshold;
}

/// Fixed figure parameters: gamma = 1/2, beta = 3/2, N = 1000, n0 = 7,
/// window [0, 0.04] sampled at 4000 uniform points plus every jump of g.
std::string figure_csv() {
  constexpr double gamma = 0.5;
  constexpr double beta = 1.5;
  constexpr std::size_t N = 1000;
  constexpr std::size_t n0 = 7;
  constexpr double window = 0.04;
  constexpr std::size_t grid = 4000;
  const Example1 ex = example1_family(gamma);
  CounterexampleOptions opts;
  opts.forced_n0 = n0;
  opts.f_sup = ex.f_sup;
  const Counterexample ce = build_counterexample(ex.f, ex.family, beta, N, opts);
  std::vector<double> ys;
  for (std::size_t i = 1; i <= grid; ++i) {
    ys.push_back(window * (static_cast<double>(i) / static_cast<double>(grid)));
  }
  const auto pts = counterexample_curve(ex.f, ex.family, ce.g, ce.params, ys);

  std::ostringstream csv;
  csv << "# gamma=0.5 beta=1.5 N=1000 n0=7 window=[0,0.04] grid=4000 uniform points plus "
         "jump points of g\n"
      << "# J: upper bound for the untruncated integral (truncated J minus the tail bound "
      << format_double(ce.certificate.tail_correction)
      << " on y >= lo_N; analytic bound on (0, lo_N))\n"
      << "# J_truncated: exact integral against the stored g (bricks n0..N)\n"
      << "# lo_N=" << format_double(ex.family.lower(N))
      << " verdict=" << (ce.certificate.verdict ? "true" : "false") << '\n'
      << "y,J,flag,f,g,J_truncated\n";
  for (const auto& p : pts) {
    csv << format_double(p.y) << ',' << format_double(p.j_upper) << ','
        << (p.kind == PointKind::Jump ? "jump" : "grid") << ',' << format_double(ex.f(p.y)) << ','
        << format_double(ce.g(p.y)) << ',' << format_double(p.j_truncated) << '\n';
  }
  return csv.str();
}

int cmd_reproduce_figure(const std::string& out) {
  const std::string csv = figure_csv();
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_text_file(out, csv);
  }
  return kOk;
}

int cmd_search_positive(const IntegrandFlags& fl, const std::string& g_file) {
  const BVFunction g = load_integrator(g_file);
  const IntegrandSpec f = make_integrand(fl, g.interval());
  try {
    PositivityWitness w = find_positive_y(f, g);
    if (w.y < g.interval().b()) w.interval = positive_interval(f, g, w);
    print_json(to_json(w));
    return kOk;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    if (std::string(e.what()).find("unbounded-variation") != std::string::npos) {
      const double a = f.domain().a();
      const double b = a + 0.1 * f.domain().length();
      const double coarse = sampled_total_variation(f, a, b, std::size_t{1} << 10);
      const double fine = sampled_total_variation(f, a, b, std::size_t{1} << 20);
      std::cerr << "sampled total variation of f on [" << format_double(a) << ", "
                << format_double(b) << "]: " << format_double(coarse) << " at 2^10, "
                << format_double(fine) << " at 2^20"
                << (fine - coarse >= 1.0 ? " (growing: variation appears unbounded)" : "")
                << '\n';
    }
    return kPrecondition;
  }
}

int cmd_selftest(std::uint64_t seed) {
  const auto reports = run_selftest(seed);
  std::size_t failed = 0;
  for (const auto& r : reports) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.cases - r.failures << '/'
              << r.cases << " worst margin " << format_double(r.worst_margin) << '\n';
    if (!r.passed()) {
      ++failed;
      std::cout << "  first failure: " << r.first_failure << '\n';
    }
  }
  std::cout << reports.size() - failed << " passed, " << failed << " failed (seed " << seed
            << ")\n";
  return failed == 0 ? kOk : kSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemann-Stieltjes integrals against functions of bounded variation"};
  app.require_subcommand(1);

  IntegrandFlags fl;
  std::string g_file;
  std::string out;
  std::string out_g;
  double y = 0.0;
  double tol = 1e-9;
  std::size_t grid = 0;
  double gamma = 0.5;
  double beta = 1.5;
  std::size_t N = 1000;
  std::optional<std::size_t> n0;
  std::optional<double> f_sup;
  std::uint64_t seed = default_seed;

  auto* integrate = app.add_subcommand("integrate", "integral of f against g up to y");
  add_integrand_flags(integrate, fl);
  integrate->add_option("--g", g_file, "integrator JSON document")->required();
  integrate->add_option("--y", y, "upper limit")->required();
  integrate->add_option("--tol", tol, "error tolerance for continuous parts");
  integrate->add_option("--grid", grid, "emit J on this many uniform points in (a, y] as CSV");
  integrate->add_option("--out", out, "CSV destination for --grid");

  auto* counter = app.add_subcommand("counterexample", "build and certify the counterexample");
  counter->add_option("--gamma", gamma, "exponent of x^gamma sin(1/x) + 2");
  counter->add_option("--beta", beta, "brick weights n^-beta");
  counter->add_option("--N", N, "number of stored bricks");
  counter->add_option("--n0", n0, "force the first retained brick");
  counter->add_option("--f-sup", f_sup, "upper bound for f (default 3)");
  counter->add_option("--out", out, "certificate JSON destination");
  counter->add_option("--out-g", out_g, "integrator JSON destination");

  auto* figure = app.add_subcommand("reproduce-figure", "curve data for the counterexample figure");
  figure->add_option("--out", out, "CSV destination (stdout if omitted)");

  auto* search = app.add_subcommand("search-positive", "find y with a positive integral");
  add_integrand_flags(search, fl);
  search->add_option("--g", g_file, "integrator JSON document")->required();

  auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
  selftest->add_option("--seed", seed, "seed for the random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*integrate) return cmd_integrate(fl, g_file, y, tol, grid, out);
    if (*counter) return cmd_counterexample(gamma, beta, N, n0, f_sup, out, out_g);
    if (*figure) return cmd_reproduce_figure(out);
    if (*search) return cmd_search_positive(fl, g_file);
    return cmd_selftest(seed);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ThresholdError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kThreshold;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const DocumentError& e) {
    std::cerr << "invalid document: " << e.what() << '\n';
    return kParse;
  } catch (const SpecError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kParse;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kParse;
  } catch (const Error& e) {
    std::cerr << "evaluation failed: " << e.what() << '\n';
    return kEval;
  }
}
