#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "srgraph/arborescence.hpp"
#include "srgraph/error.hpp"
#include "srgraph/verify.hpp"

namespace srgraph {
namespace {

SymbolGraph mul_sin_graph() {
  SymbolGraphSpec s;
  s.levels = 2;
  s.copies = 1;
  s.variable_copies = 1;
  s.num_variables = 2;
  s.operators = {find_operator("sin"), find_operator("mul")};
  return SymbolGraph::build(s);
}

bool has(const std::vector<Violation>& vs, ViolationKind kind) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == kind; });
}

TEST(Validate, AcceptsEmbedding) {
  const SymbolGraph g = mul_sin_graph();
  const auto arb = embed(g, parse("sin(x1 * x2)")).arborescence;
  ASSERT_TRUE(arb);
  EXPECT_TRUE(validate(g, *arb, TerminalSet::for_sr(g, 0)).empty());
  EXPECT_TRUE(validate(g, *arb, TerminalSet::for_sr(g, 1)).empty());
}

TEST(Validate, ReportsViolations) {
  const SymbolGraph g = mul_sin_graph();
  const VertexId sin1 = g.operator_vertex(1, 0, 0);
  const VertexId mul1 = g.operator_vertex(1, 1, 0);
  const VertexId mul2 = g.operator_vertex(2, 1, 0);
  const VertexId x1 = g.variable_vertex(0, 0);
  const VertexId x2 = g.variable_vertex(1, 0);

  // mul with one argument
  Arborescence a{g.root(), {{g.root(), mul1}, {mul1, x1}}};
  EXPECT_TRUE(has(validate(g, a, TerminalSet{{g.root()}}), ViolationKind::DegreeMismatch));

  Arborescence two_parents{g.root(), {{g.root(), x1}, {sin1, x1}, {g.root(), sin1}}};
  EXPECT_TRUE(has(validate(g, two_parents, TerminalSet{{g.root()}}), ViolationKind::MultipleParents));

  Arborescence dup{g.root(), {{g.root(), x1}, {g.root(), x1}}};
  EXPECT_TRUE(has(validate(g, dup, TerminalSet{{g.root()}}), ViolationKind::DuplicateArc));

  Arborescence only_x1{g.root(), {{g.root(), x1}}};
  EXPECT_TRUE(has(validate(g, only_x1, TerminalSet::for_sr(g, 1)), ViolationKind::MissingTerminal));

  Arborescence floating{g.root(), {{g.root(), x2}, {mul2, x1}}};
  EXPECT_TRUE(has(validate(g, floating, TerminalSet{{g.root()}}), ViolationKind::Unreachable));

  Arborescence not_in_graph{g.root(), {{x1, sin1}}};
  EXPECT_THROW(validate(g, not_in_graph, TerminalSet{{g.root()}}), StructuralError);
}

TEST(Normalize, SortsCommutativeChildren) {
  const SymbolGraph g = mul_sin_graph();
  const VertexId mul1 = g.operator_vertex(1, 1, 0);
  const VertexId x1 = g.variable_vertex(0, 0);
  const VertexId x2 = g.variable_vertex(1, 0);
  const Arborescence a{g.root(), {{mul1, x2}, {g.root(), mul1}, {mul1, x1}}};
  const Arborescence n = normalize(g, a);
  const std::vector<Arc> want = {{g.root(), mul1}, {mul1, x1}, {mul1, x2}};
  EXPECT_EQ(n.arcs, want);
  EXPECT_EQ(render(to_expression(g, a)), "x1 * x2");
}

TEST(EdgeWeights, WorkedDecomposition) {
  const SymbolGraph g = mul_sin_graph();
  const auto arb = embed(g, parse("sin(x1 * x2)")).arborescence;
  ASSERT_TRUE(arb);
  const double row[] = {0.7, -1.3};
  const EdgeWeightReport r = edge_weights(g, *arb, row);
  ASSERT_TRUE(r.defined);
  ASSERT_EQ(r.weights.size(), 4u);
  const double p = 0.7 * -1.3;
  for (const ArcWeight& w : r.weights) {
    const Vertex& head = g.vertex(w.arc.to);
    double expected = 0.0;
    if (head.kind == VertexKind::Variable) {
      expected = row[head.variable];
    } else if (head.op == find_operator("mul")) {
      expected = p - 0.7 - -1.3;
    } else {
      expected = std::sin(p) - p;
    }
    EXPECT_NEAR(w.value(), expected, 1e-12) << g.label(w.arc.to);
  }
  EXPECT_NEAR(r.total, std::sin(p), 1e-12);
}

TEST(EdgeWeights, UndefinedPropagates) {
  SymbolGraphSpec s;
  s.levels = 1;
  s.copies = 1;
  s.variable_copies = 1;
  s.num_variables = 1;
  s.operators = {find_operator("log")};
  const SymbolGraph g = SymbolGraph::build(s);
  const auto arb = embed(g, parse("log(x1)")).arborescence;
  const double row[] = {-2.0};
  EXPECT_FALSE(edge_weights(g, *arb, row).defined);
}

// Large, nearly cancelling values: the pair representation keeps the total exact.
TEST(EdgeWeights, CancellationIsCompensated) {
  SymbolGraphSpec s;
  s.levels = 1;
  s.copies = 1;
  s.variable_copies = 1;
  s.num_variables = 2;
  s.operators = {find_operator("add")};
  const SymbolGraph g = SymbolGraph::build(s);
  const auto arb = embed(g, parse("x1 + x2")).arborescence;
  const double row[] = {1e17, 3.0};
  const EdgeWeightReport r = edge_weights(g, *arb, row);
  EXPECT_EQ(r.total, 1e17 + 3.0);
}

TEST(EdgeWeights, TelescopesOnRandomTrees) {
  verify::Rng rng(3);
  const SymbolGraph g = SymbolGraph::build(SymbolGraphSpec::with_defaults(3, 2));
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const Arborescence arb = verify::random_arborescence(g, rng);
    const double row[] = {0.3 + 0.01 * i, 1.7};
    const auto value = evaluate(to_expression(g, arb), row);
    if (!value) continue;
    const EdgeWeightReport r = edge_weights(g, arb, row);
    ASSERT_TRUE(r.defined);
    EXPECT_LE(std::abs(r.total - *value), 1e-9 * std::max(1.0, std::abs(*value)));
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Export, JsonAndDot) {
  const SymbolGraph g = mul_sin_graph();
  const auto arb = embed(g, parse("sin(x1 * x2)")).arborescence;
  EXPECT_NE(to_json(*arb).find("\"arcs\""), std::string::npos);
  EXPECT_NE(to_dot(g, *arb).find("digraph"), std::string::npos);
}

}  // namespace
}  // namespace srgraph
