#include <gtest/gtest.h>

#include <set>

#include "srgraph/error.hpp"
#include "srgraph/oracle.hpp"
#include "srgraph/verify.hpp"

namespace srgraph {
namespace {

TEST(EnumerateExpressions, TinySpec) {
  SymbolGraphSpec s;
  s.levels = 1;
  s.copies = 1;
  s.variable_copies = 2;
  s.num_variables = 1;
  s.operators = {find_operator("sin")};
  const auto stream = oracle::enumerate_expressions(s);
  ASSERT_FALSE(stream.truncated);
  std::vector<std::string> got;
  for (const Expression& e : stream.expressions) got.push_back(render(e));
  const std::vector<std::string> want = {"x1", "sin(x1)", "x1 + x1", "sin(x1) + x1"};
  EXPECT_EQ(got, want);
}

TEST(EnumerateExpressions, Truncates) {
  oracle::EnumerationBudget budget;
  budget.max_items = 5;
  EXPECT_TRUE(oracle::enumerate_expressions(SymbolGraphSpec::with_defaults(1, 1), budget).truncated);
}

TEST(BruteForceDcsap, WeightsAndLimit) {
  WeightedDigraph g;
  g.num_vertices = 3;
  g.arcs = {{0, 1, 1}, {0, 2, 4}, {1, 2, 2}};
  g.terminals = {0, 2};
  EXPECT_EQ(oracle::brute_force_dcsap(g), 3.0);
  const std::vector<double> want = {3.0, 4.0, 5.0};
  EXPECT_EQ(oracle::brute_force_dcsap_weights(g), want);

  WeightedDigraph big;
  big.num_vertices = 6;
  for (VertexId u = 0; u < 6; ++u) {
    for (VertexId v = 0; v < 6; ++v) {
      if (u != v) big.arcs.push_back({u, v, 1});
    }
  }
  EXPECT_THROW(oracle::brute_force_dcsap(big), StructuralError);
}

TEST(BruteForceDcstp, DegreeBound) {
  // Path 0-1-2 or the triangle edge 0-2; vertex 1 may have degree 1 only.
  UndirectedGraph g;
  g.num_vertices = 3;
  g.edges = {{0, 1, 1}, {1, 2, 1}, {0, 2, 5}};
  g.terminals = {0, 1, 2};
  EXPECT_EQ(oracle::brute_force_dcstp(g), 2.0);
  g.degree_bound = {kUnbounded, 1, kUnbounded};
  EXPECT_EQ(oracle::brute_force_dcstp(g), 6.0);
}

TEST(BruteForceSr, PrefersFewerArcs) {
  SymbolGraphSpec s;
  s.levels = 1;
  s.copies = 1;
  s.variable_copies = 2;
  s.num_variables = 1;
  s.constants = {1.0};
  s.operators = {find_operator("add"), find_operator("mul")};
  verify::Rng rng(4);
  const Dataset d = *verify::with_target(verify::random_inputs(5, 1, 0.1, 3.0, rng), parse("x1 + x1"));
  const oracle::SrBest best = oracle::brute_force_sr(SRInstance{d, s});
  ASSERT_TRUE(best.found);
  EXPECT_EQ(render(*best.expression), "x1 + x1");
  EXPECT_TRUE(best.complete);
}

TEST(BruteForceCount, RawCountsArgumentOrders) {
  SymbolGraphSpec s;
  s.levels = 1;
  s.copies = 1;
  s.variable_copies = 1;
  s.num_variables = 2;
  s.operators = {find_operator("mul"), find_operator("sub")};
  // x1, x2, x1 + x2, x1 * x2, x1 - x2, x2 - x1
  EXPECT_EQ(oracle::brute_force_count(s, false), 6);
  EXPECT_EQ(oracle::brute_force_count(s, true), 6);
  EXPECT_EQ(count_arborescences(s, false), 6);
}

}  // namespace
}  // namespace srgraph
