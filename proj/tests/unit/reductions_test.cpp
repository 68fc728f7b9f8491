#include <gtest/gtest.h>

#include "srgraph/error.hpp"
#include "srgraph/oracle.hpp"
#include "srgraph/reductions.hpp"
#include "srgraph/verify.hpp"

namespace srgraph {
namespace {

TEST(DcstpToDcsap, DoublesEveryEdge) {
  UndirectedGraph g;
  g.num_vertices = 3;
  g.edges = {{0, 1, 2.0}, {1, 2, 3.5}};
  g.terminals = {0, 2};
  const WeightedDigraph d = dcstp_to_dcsap(g, 2);
  EXPECT_EQ(d.root, 2u);
  ASSERT_EQ(d.arcs.size(), 4u);
  EXPECT_EQ(d.arcs[2].from, 1u);
  EXPECT_EQ(d.arcs[3].from, 2u);
  EXPECT_EQ(d.arcs[3].weight, 3.5);
  EXPECT_THROW(dcstp_to_dcsap(g, 1), StructuralError);
}

TEST(DcstpToDcsap, EmptyEdgeSetIsInfeasibleOnBothSides) {
  UndirectedGraph g;
  g.num_vertices = 2;
  g.terminals = {0, 1};
  EXPECT_FALSE(oracle::brute_force_dcstp(g));
  EXPECT_FALSE(oracle::brute_force_dcsap(dcstp_to_dcsap(g, 0)));
  EXPECT_EQ(solve_min_dcsap(dcstp_to_dcsap(g, 1)).status, SolveStatus::Infeasible);
}

TEST(DcstpToDcsap, PreservesOptimumForEveryRoot) {
  verify::Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    const UndirectedGraph g = verify::random_connected_graph(5, 5, rng);
    const auto undirected = oracle::brute_force_dcstp(g);
    for (VertexId root : g.terminals) {
      EXPECT_EQ(undirected, oracle::brute_force_dcsap(dcstp_to_dcsap(g, root)));
    }
  }
}

TEST(Bisect, WorkedExamples) {
  const BisectResult a = bisect_min_weight([](long long eps) { return eps >= 7; }, 0, 15);
  EXPECT_EQ(a.minimum, 7);
  EXPECT_LE(a.calls, 5);
  const BisectResult b = bisect_min_weight([](long long eps) { return eps >= 3; }, 3, 3);
  EXPECT_EQ(b.minimum, 3);
  EXPECT_EQ(b.calls, 1);
  const BisectResult none = bisect_min_weight([](long long) { return false; }, 0, 9);
  EXPECT_FALSE(none.minimum);
  EXPECT_THROW(bisect_min_weight([](long long) { return true; }, 4, 3), StructuralError);
}

TEST(Bisect, CallBound) {
  for (long long hi = 0; hi < 64; ++hi) {
    for (long long target = 0; target <= hi + 1; ++target) {
      const BisectResult r = bisect_min_weight([&](long long eps) { return eps >= target; }, 0, hi);
      const int bound = static_cast<int>(std::ceil(std::log2(double(hi + 1)))) + 1;
      EXPECT_LE(r.calls, bound);
      if (target <= hi) {
        EXPECT_EQ(r.minimum, target);
      } else {
        EXPECT_FALSE(r.minimum);
      }
    }
  }
}

SRInstance instance(const char* formula, std::vector<const OperatorDef*> ops) {
  SymbolGraphSpec s;
  s.levels = 2;
  s.copies = 1;
  s.variable_copies = 1;
  s.num_variables = 2;
  s.operators = std::move(ops);
  verify::Rng rng(2);
  Dataset d = *verify::with_target(verify::random_inputs(6, 2, 0.5, 2.0, rng), parse(formula));
  return SRInstance{std::move(d), std::move(s)};
}

TEST(SrToDcsap, BuildsInstance) {
  SRInstance inst = instance("sin(x1 * x2)", {find_operator("sin"), find_operator("mul")});
  inst.epsilon = 1e-3;
  const SymbolDcsapInstance r = sr_to_dcsap(inst, 1);
  EXPECT_EQ(r.tol, 1e-3);
  EXPECT_EQ(r.terminals.vertices.size(), 2u);
  EXPECT_EQ(r.terminals.vertices[1], r.graph.variable_vertex(1, 0));
  EXPECT_EQ(r.target, inst.dataset.y());
  EXPECT_THROW(sr_to_dcsap(inst, 2), StructuralError);
}

TEST(SrToDcsap, DecisionMatchesBruteForce) {
  const SRInstance yes = instance("sin(x1 * x2)", {find_operator("sin"), find_operator("mul")});
  const ReducedDecision d = sr_decide_via_dcsap(yes);
  ASSERT_TRUE(d.yes);
  EXPECT_EQ(render(*d.expression), "sin(x1 * x2)");
  EXPECT_TRUE(oracle::brute_force_sr(yes).found);

  const SRInstance no = instance("x1 - x2", {find_operator("sin"), find_operator("mul")});
  EXPECT_FALSE(sr_decide_via_dcsap(no).yes);
  EXPECT_FALSE(oracle::brute_force_sr(no).found);
}

}  // namespace
}  // namespace srgraph
