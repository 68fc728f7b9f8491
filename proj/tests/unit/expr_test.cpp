#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "srgraph/error.hpp"
#include "srgraph/expr.hpp"

namespace srgraph {
namespace {

TEST(Operators, LookupByNameOrSymbol) {
  ASSERT_NE(find_operator("add"), nullptr);
  EXPECT_EQ(find_operator("+"), find_operator("add"));
  EXPECT_EQ(find_operator("*"), find_operator("mul"));
  EXPECT_EQ(find_operator("nope"), nullptr);
  EXPECT_EQ(default_operators().size(), 11u);
}

TEST(Operators, DomainGuards) {
  const double neg[] = {-1.0};
  EXPECT_FALSE(apply_operator(*find_operator("log"), neg));
  EXPECT_FALSE(apply_operator(*find_operator("sqrt"), neg));
  const double zero_div[] = {1.0, 0.0};
  EXPECT_FALSE(apply_operator(*find_operator("div"), zero_div));
  const double huge[] = {1000.0};
  EXPECT_FALSE(apply_operator(*find_operator("exp"), huge));
  const double fma_args[] = {2.0, 3.0, 1.0};
  EXPECT_DOUBLE_EQ(*apply_operator(*find_operator("fma"), fma_args), 7.0);
}

TEST(Parse, RoundTripsThroughRender) {
  for (const char* text : {"sin(x1 * x2)", "sin(x1^2) + x2", "x1 - x2", "fma(x1, x2, 1)", "exp(log(x1))"}) {
    const Expression e = parse(text);
    EXPECT_EQ(parse(render(e)), e) << text;
  }
}

TEST(Parse, ErrorCarriesOffset) {
  try {
    parse("sin(");
    FAIL() << "expected a parse error";
  } catch (const ParseError& err) {
    EXPECT_EQ(err.offset(), 4u);
  }
  EXPECT_THROW(parse("x0"), ParseError);
  EXPECT_THROW(parse("1 +"), ParseError);
  EXPECT_THROW(parse("foo(x1)"), ParseError);
}

TEST(Expression, ArityIsChecked) {
  EXPECT_THROW(Expression::apply(*find_operator("sin"), {}), StructuralError);
}

TEST(Expression, CanonicalSortsCommutativeChildren) {
  EXPECT_EQ(canonical(parse("x2 + x1")), canonical(parse("x1 + x2")));
  EXPECT_EQ(canonical(parse("2 * sin(x1)")), canonical(parse("sin(x1) * 2")));
  EXPECT_FALSE(canonical(parse("x2 - x1")) == canonical(parse("x1 - x2")));
  // Apply < Variable < Constant
  EXPECT_LT(compare(parse("sin(x1)"), parse("x1")), 0);
  EXPECT_LT(compare(parse("x1"), parse("1")), 0);
}

TEST(Expression, CountsAndDepth) {
  const Expression e = parse("sin(x1 * x2)");
  EXPECT_EQ(e.operator_depth(), 2);
  EXPECT_EQ(e.variable_bound(), 2u);
  EXPECT_EQ(e.kind(), Expression::Kind::TopSum);
  EXPECT_EQ(e.arc_count(), 4u);
  EXPECT_EQ(parse("sin(x1) + x2").arc_count(), 3u);
  EXPECT_THROW(Expression::top_sum({e}), StructuralError);
}

TEST(Evaluate, Values) {
  const double row[] = {0.5, 2.0};
  EXPECT_DOUBLE_EQ(*evaluate(parse("sin(x1 * x2)"), row), std::sin(1.0));
  EXPECT_DOUBLE_EQ(*evaluate(parse("sin(x1^2) + x2"), row), std::sin(0.25) + 2.0);
  EXPECT_FALSE(evaluate(parse("log(x1 - x2)"), row));
  const double short_row[] = {1.0};
  EXPECT_THROW(evaluate(parse("x2"), short_row), StructuralError);
}

TEST(Loss, MaxAbsAndMse) {
  const std::vector<double> y = {1.0, 2.0, 3.0};
  const std::vector<std::optional<double>> p = {1.0, 2.5, 2.0};
  EXPECT_DOUBLE_EQ(loss(y, p, LossKind::MaxAbs), 1.0);
  EXPECT_DOUBLE_EQ(loss(y, p, LossKind::MeanSquared), (0.25 + 1.0) / 3.0);
  const std::vector<std::optional<double>> undefined = {1.0, std::nullopt, 3.0};
  EXPECT_TRUE(std::isinf(loss(y, undefined, LossKind::MaxAbs)));
  EXPECT_EQ(loss_kind_from_string(to_string(LossKind::MeanSquared)), LossKind::MeanSquared);
}

TEST(Dataset, ShapeIsChecked) {
  EXPECT_THROW(Dataset(2, 1, {1.0}, {1.0, 2.0}), StructuralError);
  EXPECT_THROW(Dataset(1, 0, {}, {1.0}), StructuralError);
}

}  // namespace
}  // namespace srgraph
