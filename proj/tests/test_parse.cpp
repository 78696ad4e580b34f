#include <catch2/catch_amalgamated.hpp>

#include "air/parse.hpp"
#include "air/report.hpp"
#include "test_util.hpp"

using air::Complex;
using air::RationalAIR;

TEST_CASE("expression parsing hits the expected coefficients") {
  RationalAIR eq = air::parse_equation("y' = (y^2 - y)/((x^2+1)*y + x - 2)");
  REQUIRE(eq.num[2] == Complex(1));
  REQUIRE(eq.num[1] == Complex(-1));
  REQUIRE(eq.num[0] == Complex(0));
  REQUIRE(eq.den_y[0] == Complex(1));
  REQUIRE(eq.den_y[1] == Complex(0));
  REQUIRE(eq.den_y[2] == Complex(1));
  REQUIRE(eq.den_c[0] == Complex(-2));
  REQUIRE(eq.den_c[1] == Complex(1));

  // adjacency, unary signs and the imaginary unit
  RationalAIR eq2 = air::parse_equation("y' = (2y^3 + i*y)/(-x y + 3)");
  REQUIRE(eq2.num[3] == Complex(2));
  REQUIRE(eq2.num[1] == Complex(0, 1));
  REQUIRE(eq2.den_y[1] == Complex(-1));
  REQUIRE(eq2.den_c[0] == Complex(3));

  // constant denominators distribute through fractions
  RationalAIR eq3 = air::parse_equation("y' = (y/2)/(y + x^2)");
  REQUIRE(std::abs(eq3.num[1] / eq3.den_y[0] - Complex(0.5)) < 1e-15);
}

TEST_CASE("shape violations carry their specific messages") {
  auto msg_of = [](const std::string& text) {
    try {
      air::parse_equation(text);
    } catch (const air::Error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  REQUIRE(msg_of("y' = (y^4)/(y + x)") == "numerator degree in y exceeds 3");
  REQUIRE(msg_of("y' = y/(y^2 + x)") == "denominator not linear in y");
  REQUIRE(msg_of("y' = y/(x^3*y + 1)") == "denominator coefficients not quadratic in x");
  REQUIRE(msg_of("y' = (x*y)/(y + x)") == "numerator coefficients must not depend on x");

  auto code_of = [](const std::string& text) {
    try {
      air::parse_equation(text);
    } catch (const air::Error& e) {
      return e.code();
    }
    return air::ErrorCode::Internal;
  };
  REQUIRE(code_of("y = y/(y+x)") == air::ErrorCode::ParseSyntax);     // missing y'
  REQUIRE(code_of("y' = y/((y+x)") == air::ErrorCode::ParseSyntax);   // unbalanced paren
  REQUIRE(code_of("y' = y/(y+x) extra") == air::ErrorCode::ParseSyntax);
  REQUIRE(code_of("y' = y/(y+x)") == air::ErrorCode::Internal);       // valid input: no error
}

TEST_CASE("render emits re-parseable text") {
  testutil::Rng rng(163);
  for (int trial = 0; trial < 25; ++trial) {
    RationalAIR eq = rng.equation();
    RationalAIR back = air::parse_equation(air::render(eq));
    REQUIRE(air::proj_distance(eq, back) < 1e-12);
  }
  // canonical text forms
  RationalAIR c6;
  c6.num = {1, 0, 0, 0};
  c6.den_y = {1, 0, 0};
  c6.den_c = {0, 0, 1};
  REQUIRE(air::render(c6) == "y' = (1)/((1)*y + x^2)");
}

TEST_CASE("coefficient files accept all three complex spellings") {
  air::Json j = {
      {"a0", 1.0},
      {"s0", {{"re", 2.0}, {"im", -1.0}}},
      {"r2", air::Json::array({0.0, 3.0})},
  };
  RationalAIR eq = air::equation_from_json(j);
  REQUIRE(eq.num[0] == Complex(1));
  REQUIRE(eq.den_y[0] == Complex(2, -1));
  REQUIRE(eq.den_c[2] == Complex(0, 3));
  air::Json bad = {{"a0", "one"}};
  REQUIRE_THROWS_AS(air::equation_from_json(bad), air::Error);
}

TEST_CASE("end-to-end run report") {
  RationalAIR eq = air::parse_equation("y' = 1/(y + x^2)");
  air::RunOptions opt;
  auto res = air::run(eq, opt);
  REQUIRE(res.exit_code == 0);
  REQUIRE(res.report["class"]["name"] == "C6");
  REQUIRE(res.report["verification"]["passed"].get<bool>());
  REQUIRE(res.report["verification"]["drift"].get<double>() < 1e-6);

  // classification-only stops before solving
  opt.classify_only = true;
  auto res2 = air::run(eq, opt);
  REQUIRE(res2.exit_code == 0);
  REQUIRE(!res2.report.contains("verification"));

  // an unreachable tolerance turns into the verification-failed exit code
  air::RunOptions strict;
  strict.tol = 1e-300;
  auto res3 = air::run(eq, strict);
  REQUIRE(res3.exit_code == 2);
  REQUIRE(!res3.report["verification"]["passed"].get<bool>());

  // the linear escape case reports a note and succeeds without a solution
  RationalAIR lin = air::parse_equation("y' = y/(y + x)");
  auto res4 = air::run(lin, air::RunOptions{});
  REQUIRE(res4.exit_code == 0);
  REQUIRE(res4.report.contains("note"));

  // explicit bad start point surfaces as an error report
  air::RunOptions bad;
  bad.x0 = 0.0;
  bad.y0 = Complex(0.0, 0.0);  // denominator vanishes at the origin
  bad.x1 = 0.5;
  auto res5 = air::run(eq, bad);
  REQUIRE(res5.exit_code == 1);
  REQUIRE(res5.report.contains("error"));
}
