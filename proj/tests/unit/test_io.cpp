#include <gtest/gtest.h>

#include <string>

#include "rsint/io.hpp"

using namespace rsint;

namespace {

std::string pointer_of(const json& doc) {
  try {
    integrator_from_json(doc);
  } catch (const DocumentError& e) {
    return e.pointer();
  }
  return "<none>";
}

}  // namespace

TEST(Document, Step) {
  const auto g = integrator_from_json(json::parse(
      R"({"type":"step","interval":[0,1],"breakpoints":[0.5],"piece_values":[0,1],"end_value":0})"));
  EXPECT_TRUE(g.is_pure_step());
  EXPECT_EQ(g(0.5), 1.0);
  EXPECT_EQ(g(1.0), 0.0);
}

TEST(Document, SumOfParts) {
  const auto g = integrator_from_json(json::parse(R"({"type":"sum","parts":[
      {"type":"step","interval":[0,2],"breakpoints":[1],"piece_values":[0,1],"end_value":1},
      {"type":"piecewise_linear","knots":[[0,0],[2,1]]}]})"));
  EXPECT_DOUBLE_EQ(g(1.0), 1.5);
  EXPECT_FALSE(g.is_pure_step());
}

TEST(Document, Theorem2) {
  const auto g = integrator_from_json(
      json::parse(R"({"type":"theorem2","gamma":0.5,"beta":1.5,"truncation":1000,"n0":7})"));
  EXPECT_EQ(g.jumps(0.0, 1.0).size(), 2U * (1000 - 7 + 1));
}

TEST(Document, PositionedErrors) {
  EXPECT_EQ(pointer_of(json::parse(R"({"type":"step","interval":[0,1],"breakpoints":[0.5,0.4],
      "piece_values":[0,1,2],"end_value":0})")),
            "/breakpoints/1");
  EXPECT_EQ(pointer_of(json::parse(R"({"type":"step","interval":[1,0],"breakpoints":[],
      "piece_values":[0],"end_value":0})")),
            "/interval");
  EXPECT_EQ(pointer_of(json::parse(R"({"type":"sum","parts":[
      {"type":"piecewise_linear","knots":[[0,0],[1,"a"]]}]})")),
            "/parts/0/knots/1/1");
  EXPECT_EQ(pointer_of(json::parse(R"({"type":"wave"})")), "/type");
  EXPECT_EQ(pointer_of(json::parse(R"({"type":"theorem2","gamma":1.5,"beta":1.5,"truncation":5})")),
            "/gamma");
  EXPECT_EQ(pointer_of(json::parse(R"({"type":"step","interval":[0,1],"breakpoints":[0.5],
      "piece_values":[0],"end_value":0})")),
            "/piece_values");
  EXPECT_EQ(pointer_of(json::parse(R"({"type":"sum","parts":[
      {"type":"piecewise_linear","knots":[[0,0],[1,1]]},
      {"type":"piecewise_linear","knots":[[0,0],[2,1]]}]})")),
            "/parts/1");
}

TEST(Document, CanonicalRoundTrip) {
  const char* docs[] = {
      R"({"type":"step","interval":[0,1],"breakpoints":[0.25,0.5,0.75],"piece_values":[0,1,1,0.5],"end_value":0})",
      R"({"type":"piecewise_linear","knots":[[0,0],[0.5,1],[1,0.25]]})",
      R"({"type":"sum","parts":[
          {"type":"step","interval":[0,1],"breakpoints":[0.3],"piece_values":[0,2],"end_value":2},
          {"type":"piecewise_linear","knots":[[0,0],[1,1]]},
          {"type":"step","interval":[0,1],"breakpoints":[0.6],"piece_values":[0,-1],"end_value":0}]})",
      R"({"type":"theorem2","gamma":0.5,"beta":1.5,"truncation":50})",
  };
  for (const char* d : docs) {
    const json once = to_json(integrator_from_json(json::parse(d)));
    const json twice = to_json(integrator_from_json(once));
    EXPECT_EQ(once, twice) << d;
    EXPECT_EQ(once.dump(), json::parse(once.dump()).dump());
  }
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.5e-7), "-2.5e-07");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
