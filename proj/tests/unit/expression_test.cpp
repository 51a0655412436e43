#include <doctest.h>

#include <cmath>

#include "maslovflow/cli/expression.hpp"

using namespace maslovflow;
using namespace maslovflow::cli;

namespace {

ParseError parse_failure(const char* src) {
  try {
    parse_expression(src);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("parsed: " << src);
  return ParseError(ErrorCode::SyntaxError, 0, "");
}

}  // namespace

TEST_CASE("expression examples") {
  const Expression e = parse_expression("1i*(1 + 0.5*s*sin(pi*t))");
  const Complex v = e.evaluate(1.0, 0.5);
  CHECK(std::abs(v - Complex(0.0, 1.5)) < 1e-15);
  CHECK(parse_expression("0").evaluate(0.3, 0.7) == Complex(0.0, 0.0));
  const ParseError bare = parse_failure("i*(1 + 0.5*s*sin(pi*t))");
  CHECK(bare.code() == ErrorCode::UnknownIdentifier);
  CHECK(bare.offset() == 0);
}

TEST_CASE("expression grammar") {
  const double s = 0.3, t = 1.7;
  CHECK(parse_expression("2i").evaluate(s, t) == Complex(0.0, 2.0));
  CHECK(parse_expression("-s - -t").evaluate(s, t).real() == doctest::Approx(-s + t));
  CHECK(parse_expression("\xe2\x88\x92s").evaluate(s, t).real() == doctest::Approx(-s));
  CHECK(parse_expression("  s*t / 2 ").evaluate(s, t).real() == doctest::Approx(s * t / 2));
  CHECK(parse_expression("1 - 2 - 3").evaluate(s, t).real() == doctest::Approx(-4.0));
  CHECK(parse_expression("8 / 4 / 2").evaluate(s, t).real() == doctest::Approx(1.0));
  CHECK(parse_expression("exp(1i*pi)").evaluate(s, t).real() == doctest::Approx(-1.0));
  CHECK(parse_expression("sqrt(0 - 4)").evaluate(s, t).imag() == doctest::Approx(2.0));
  CHECK(parse_expression("cos(s) + 1.5e-1").evaluate(s, t).real() == doctest::Approx(std::cos(s) + 0.15));
}

TEST_CASE("expression errors") {
  const ParseError e = parse_failure("s +* t");
  CHECK(e.code() == ErrorCode::SyntaxError);
  CHECK(e.offset() == 3);
  CHECK(parse_failure("i").code() == ErrorCode::UnknownIdentifier);
  CHECK(parse_failure("2*x").code() == ErrorCode::UnknownIdentifier);
  CHECK(parse_failure("2*x").offset() == 2);
  CHECK(parse_failure("tan(s)").code() == ErrorCode::UnknownIdentifier);
  CHECK(parse_failure("sin s").code() == ErrorCode::SyntaxError);
  CHECK(parse_failure("(s").code() == ErrorCode::SyntaxError);
  CHECK(parse_failure("").code() == ErrorCode::SyntaxError);
  CHECK(parse_failure("s t").code() == ErrorCode::SyntaxError);
}

TEST_CASE("pretty-print round trip") {
  const char* sources[] = {"1i*(1 + 0.5*s*sin(pi*t))", "-s*exp(2i*pi*s) / (1 + t*t)", "sqrt(1 + s) - cos(t)/3",
                           "0.1 - -0.2*s", "1e-3*t - (s - t)*(s + 2i)"};
  for (const char* src : sources) {
    const Expression e = parse_expression(src);
    const Expression back = parse_expression(e.to_string());
    CHECK(back.to_string() == e.to_string());
    for (int a = 0; a < 10; ++a) {
      for (int b = 0; b < 10; ++b) {
        const double s = a / 9.0, t = 2.0 * b / 9.0;
        const Complex x = e.evaluate(s, t), y = back.evaluate(s, t);
        CHECK(std::abs(x - y) <= 1e-15 * std::max(1.0, std::abs(x)));
      }
    }
  }
}

TEST_CASE("expression matrices") {
  std::vector<Expression> entries = {parse_expression("s"), parse_expression("t"), parse_expression("1i"),
                                     parse_expression("2")};
  const ExpressionMatrix m(2, 2, entries);
  const CMatrix v = m.evaluate(0.25, 0.5);
  CHECK(v(0, 0) == Complex(0.25, 0.0));
  CHECK(v(0, 1) == Complex(0.5, 0.0));
  CHECK(v(1, 0) == Complex(0.0, 1.0));
  CHECK(v(1, 1) == Complex(2.0, 0.0));
}
