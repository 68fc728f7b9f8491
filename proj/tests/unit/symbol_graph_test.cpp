#include <gtest/gtest.h>

#include "srgraph/error.hpp"
#include "srgraph/oracle.hpp"
#include "srgraph/symbol_graph.hpp"

namespace srgraph {
namespace {

SymbolGraphSpec sin_spec(int variable_copies) {
  SymbolGraphSpec s;
  s.levels = 1;
  s.copies = 1;
  s.variable_copies = variable_copies;
  s.num_variables = 1;
  s.operators = {find_operator("sin")};
  return s;
}

TEST(Spec, DefaultsAndChecks) {
  const SymbolGraphSpec s = SymbolGraphSpec::with_defaults(2, 2);
  EXPECT_EQ(s.copies, 2);
  EXPECT_EQ(s.variable_copies, 2);
  EXPECT_EQ(s.constants.size(), 4u);
  EXPECT_EQ(s.operators.size(), 11u);
  SymbolGraphSpec bad = s;
  bad.levels = 0;
  EXPECT_THROW(bad.check(), StructuralError);
  bad = s;
  bad.num_variables = 0;
  EXPECT_THROW(bad.check(), StructuralError);
  bad = s;
  bad.operators.push_back(nullptr);
  EXPECT_THROW(bad.check(), StructuralError);
}

TEST(SymbolGraph, LayerMajorNumbering) {
  SymbolGraphSpec s = SymbolGraphSpec::with_defaults(2, 2);
  s.operators = {find_operator("sin"), find_operator("mul")};
  const SymbolGraph g = SymbolGraph::build(s);
  // root, 2 levels x 2 ops x 2 copies, 2 vars x 2 copies, 4 constants
  EXPECT_EQ(g.num_vertices(), 1u + 8u + 4u + 4u);
  EXPECT_EQ(g.operator_vertex(1, 0, 0), 1u);
  EXPECT_EQ(g.operator_vertex(1, 1, 1), 4u);
  EXPECT_EQ(g.operator_vertex(2, 0, 0), 5u);
  EXPECT_EQ(g.variable_vertex(0, 0), 9u);
  EXPECT_EQ(g.leaves_begin(), 9u);
  EXPECT_EQ(g.constant_vertex(0), 13u);
  EXPECT_EQ(g.degree_bound(g.operator_vertex(1, 1, 0)), 2);
  EXPECT_EQ(g.degree_bound(g.variable_vertex(1, 1)), 0);
  EXPECT_TRUE(g.commutative(g.operator_vertex(1, 1, 0)));
  EXPECT_FALSE(g.commutative(g.operator_vertex(1, 0, 0)));
  EXPECT_EQ(g.symmetry_class(g.root()), -1);
  EXPECT_EQ(g.symmetry_class(g.operator_vertex(2, 1, 0)), g.symmetry_class(g.operator_vertex(2, 1, 1)));
  EXPECT_NE(g.symmetry_class(g.operator_vertex(1, 1, 0)), g.symmetry_class(g.operator_vertex(2, 1, 0)));
}

TEST(SymbolGraph, ArcsGoDownLayers) {
  SymbolGraphSpec s = SymbolGraphSpec::with_defaults(2, 1);
  s.operators = {find_operator("sin")};
  const SymbolGraph g = SymbolGraph::build(s);
  const VertexId top = g.operator_vertex(1, 0, 0);
  const VertexId low = g.operator_vertex(2, 0, 0);
  EXPECT_TRUE(g.has_arc(g.root(), top));
  EXPECT_FALSE(g.has_arc(g.root(), low));  // the root only sees level 1 and the leaves
  EXPECT_TRUE(g.has_arc(top, low));
  EXPECT_FALSE(g.has_arc(low, top));
  EXPECT_TRUE(g.has_arc(low, g.variable_vertex(0, 1)));
  EXPECT_EQ(g.arc_kind(g.constant_vertex(0)), ArcKind::Constant);
  EXPECT_EQ(g.arc_kind(low), ArcKind::Operator);
}

TEST(SymbolGraph, TinyDot) {
  const std::string dot = to_dot(SymbolGraph::build(sin_spec(1)));
  std::size_t nodes = 0, edges = 0;
  for (std::size_t pos = 0; (pos = dot.find("[label=", pos)) != std::string::npos; ++pos) ++nodes;
  for (std::size_t pos = 0; (pos = dot.find(" -> ", pos)) != std::string::npos; ++pos) ++edges;
  EXPECT_EQ(nodes, 3u);
  EXPECT_EQ(edges, 3u);
}

// Small counts worked out by hand, e.g. with two copies of x:
// x, x, x + x, sin(x), sin(x), sin(x) + x, sin(x) + x.
TEST(Count, HandCounted) {
  EXPECT_EQ(count_arborescences(sin_spec(1), false), 2);
  EXPECT_EQ(count_arborescences(sin_spec(1), true), 2);
  EXPECT_EQ(count_arborescences(sin_spec(2), false), 7);
  EXPECT_EQ(count_arborescences(sin_spec(2), true), 4);
}

TEST(Count, MatchesEnumerationOracle) {
  SymbolGraphSpec s;
  s.levels = 2;
  s.copies = 1;
  s.variable_copies = 2;
  s.num_variables = 1;
  s.constants = {1.0};
  s.operators = {find_operator("sin"), find_operator("add")};
  EXPECT_EQ(count_arborescences(s, false), oracle::brute_force_count(s, false));
  EXPECT_EQ(count_arborescences(s, true), oracle::brute_force_count(s, true));
  EXPECT_EQ(count_arborescences(s, true), oracle::enumerate_expressions(s).expressions.size());
}

TEST(Count, DefaultSpecRawCountIsPolynomial) {
  const auto raw = count_arborescences(SymbolGraphSpec::with_defaults(2, 2), false);
  EXPECT_GT(raw, 1'000'000);
  EXPECT_THROW(count_arborescences(SymbolGraphSpec::with_defaults(2, 2), true), StructuralError);
}

TEST(Embed, FailureReasons) {
  const SymbolGraph g = SymbolGraph::build(sin_spec(1));
  EXPECT_EQ(embed(g, parse("sin(sin(x1))")).failure, EmbedFailure::Depth);
  EXPECT_EQ(embed(g, parse("sin(x1) + sin(x1)")).failure, EmbedFailure::Copies);
  EXPECT_EQ(embed(g, parse("x1 + 3")).failure, EmbedFailure::Constant);
  const EmbedResult ok = embed(g, parse("sin(x1)"));
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok.arborescence->arcs.size(), 2u);
}

}  // namespace
}  // namespace srgraph
