#include "finsler/expression.hpp"
#include "finsler/fields.hpp"
#include "finsler/types.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace finsler;

namespace {

double eval(const char* text, std::vector<double> args = {0.0, 0.0, 0.0}) {
  return Expression::parse(text, coordinate_bindings(3))(args);
}

}  // namespace

TEST(Expression, Arithmetic) {
  EXPECT_DOUBLE_EQ(eval("1 + 2 * 3"), 7.0);
  EXPECT_DOUBLE_EQ(eval("(1 + 2) * 3"), 9.0);
  EXPECT_DOUBLE_EQ(eval("2 ^ 3 ^ 2"), 512.0);  // right associative
  EXPECT_DOUBLE_EQ(eval("-2 ^ 2"), -4.0);
  EXPECT_DOUBLE_EQ(eval("8 / 4 / 2"), 1.0);
  EXPECT_DOUBLE_EQ(eval("1.5e2"), 150.0);
}

TEST(Expression, VariablesAndAliases) {
  EXPECT_DOUBLE_EQ(eval("x0 + 10 * x1 + 100 * x2", {1, 2, 3}), 321.0);
  EXPECT_DOUBLE_EQ(eval("x + 10 * y + 100 * z", {1, 2, 3}), 321.0);
}

TEST(Expression, Functions) {
  EXPECT_NEAR(eval("sin(pi / 2) + cos(0) + exp(0) + log(e)"), 4.0, 1e-15);
  EXPECT_NEAR(eval("sqrt(16) + abs(-3) + atan(1) * 4 / pi"), 8.0, 1e-15);
  EXPECT_NEAR(eval("tanh(0.3)", {}), std::tanh(0.3), 1e-15);
  EXPECT_NEAR(eval("sinh(x) - cosh(x)", {0.7, 0, 0}), -std::exp(-0.7), 1e-15);
}

TEST(Expression, Errors) {
  const auto b = coordinate_bindings(2);
  for (const char* bad : {"", "1 +", "(1", "foo", "x3", "sin", "2 ** 3", "1 2"}) {
    try {
      Expression::parse(bad, b);
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::SchemaError) << bad;
    }
  }
}

TEST(Expression, ConstantDetection) {
  EXPECT_TRUE(Expression::parse("2 * pi", coordinate_bindings(2)).is_constant());
  EXPECT_FALSE(Expression::parse("2 * x0", coordinate_bindings(2)).is_constant());
}

TEST(Fields, ExpressionField) {
  const ScalarField f = expression_field("x0 * x1 + 1", 2);
  Vector x(2);
  x << 2.0, 3.0;
  EXPECT_DOUBLE_EQ(f(x), 7.0);
}

TEST(Fields, GridTableIsMultilinear) {
  // f(x, y) = 1 + 2x + 3y + 4xy is reproduced exactly by bilinear interpolation
  std::vector<double> values;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 4; ++i) {
      const double x = i / 3.0, y = j / 2.0;
      values.push_back(1 + 2 * x + 3 * y + 4 * x * y);
    }
  const GridTable t({{0, 1}, {0, 1}}, {4, 3}, values);
  Vector q(2);
  q << 0.37, 0.81;
  EXPECT_NEAR(t(q), 1 + 2 * 0.37 + 3 * 0.81 + 4 * 0.37 * 0.81, 1e-14);
  q << 1.5, -1.0;  // clamped
  EXPECT_NEAR(t(q), 1 + 2, 1e-14);
}
