#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "rsint/io.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(RSINT_BIN) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string sample(const char* name) { return std::string(SAMPLES_DIR) + "/" + name; }

bool contains(const std::string& s, const std::string& what) {
  return s.find(what) != std::string::npos;
}

}  // namespace

TEST(Cli, IntegrateBrick) {
  const auto r = run("integrate --f x --lipschitz 1 --g " + sample("brick.json") + " --y 1");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = rsint::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["value"].get<double>(), -0.5);
}

TEST(Cli, IntegrateGrid) {
  const auto r = run("integrate --f 1 --g " + sample("mixed.json") + " --y 1 --grid 4");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "y,J,flag,error_bound"));
  EXPECT_TRUE(contains(r.out, "0.3,2.6,jump,0"));
}

TEST(Cli, IntegrateErrors) {
  EXPECT_EQ(run("integrate --f 'sin x' --g " + sample("brick.json") + " --y 1").code, 2);
  EXPECT_EQ(run("integrate --f x --g " + sample("brick.json") + " --y 2").code, 2);
  EXPECT_EQ(run("integrate --f '1/(x-0.5)' --g " + sample("brick.json") + " --y 1").code, 3);
  EXPECT_EQ(run("integrate --f x --g /nonexistent/g.json --y 1").code, 5);
}

TEST(Cli, Counterexample) {
  const auto r = run("counterexample --gamma 0.5 --beta 1.5 --N 1000 --n0 7");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "n0 7 valid"));
  EXPECT_TRUE(contains(r.out, "verdict true"));
  EXPECT_TRUE(contains(r.out, "empirical_threshold 6"));
}

TEST(Cli, CounterexampleFailures) {
  EXPECT_EQ(run("counterexample --N 3").code, 4);
  EXPECT_EQ(run("counterexample --gamma 1.5").code, 2);
  EXPECT_EQ(run("counterexample --beta 1").code, 2);
}

TEST(Cli, SearchPositive) {
  const auto r = run("search-positive --f-pl " + sample("tent_f.json") + " --g " +
                     sample("staircase.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = rsint::json::parse(r.out);
  EXPECT_GT(j["lower_bound"].get<double>(), 0.0);

  const auto u = run("search-positive --f 'x^0.5*sin(1/x)+2' --fill 0 2 --g " +
                     sample("theorem2.json"));
  EXPECT_EQ(u.code, 6) << u.out;
  EXPECT_TRUE(contains(u.out, "unbounded-variation"));
  EXPECT_TRUE(contains(u.out, "2^20"));
}

TEST(Cli, FigureIsDeterministic) {
  const auto a = run("reproduce-figure");
  const auto b = run("reproduce-figure");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  std::istringstream in(a.out);
  std::string line;
  std::size_t rows = 0;
  const double g_max = std::pow(7.0, -1.5);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'y') continue;
    double y = 0, J = 0, f = 0, g = 0, jt = 0;
    char flag[8] = {};
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%7[a-z],%lf,%lf,%lf", &y, &J, flag, &f, &g, &jt),
              6)
        << line;
    EXPECT_LE(J, 0.0) << line;
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, g_max * (1 + 1e-15));
    ++rows;
  }
  EXPECT_GE(rows, 4000U);
}

TEST(Cli, Selftest) {
  const auto r = run("selftest --seed 7");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "7 passed, 0 failed"));
}

TEST(Cli, Usage) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}
