#include <gtest/gtest.h>

#include "aam/expr_parser.hpp"

using namespace aam;

TEST(ExprParser, PrecedenceOfPowerOverNegation) {
  EXPECT_EQ(parse_expr("- x_z ^ 2"), -(OperatorExpr::x(2) * OperatorExpr::x(2)));
  EXPECT_EQ(parse_expr("2 * x_z ^ 2"), parse_expr("x_z * x_z * 2"));
}

TEST(ExprParser, RationalLiteralsAndNegativeScalarPowers) {
  EXPECT_EQ(parse_expr("3/4 * m ^ -1 * m"), OperatorExpr(ScalarCoeff(Rational(3, 4))));
  EXPECT_EQ(parse_expr("(hbar * c) ^ -2"),
            OperatorExpr(ScalarCoeff::symbol(Symbol::hbar, -2) * ScalarCoeff::symbol(Symbol::c, -2)));
}

TEST(ExprParser, TolerantOfMissingWhitespace) {
  EXPECT_EQ(parse_expr("p_z*x_z"), parse_expr("p_z * x_z"));
}

TEST(ExprParser, UnknownTokenIsReported) {
  try {
    parse_expr("x_z * q_z");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.token, "q_z");
  }
  EXPECT_THROW(parse_expr("x_z $ p_z"), ParseError);
  EXPECT_THROW(parse_expr("(x_z"), ParseError);
  EXPECT_THROW(parse_expr(""), ParseError);
  EXPECT_THROW(parse_expr("x_z ^ 1/2"), ParseError);
}

TEST(ExprParser, NegativePowerOfOperatorIsRejected) {
  EXPECT_THROW(parse_expr("x_z ^ -1"), std::invalid_argument);
}

TEST(ExprParser, PrintsCanonicalText) {
  EXPECT_EQ(parse_expr("0").str(), "0");
  EXPECT_EQ(parse_expr("s_y * s_x").str(), "- i * s_z");
  const auto e = parse_expr("1/2 * beta * m ^ -1 * (p_x ^ 2 + p_z ^ 2) - hbar * s_x");
  EXPECT_EQ(parse_expr(e.str()), e);
}
