#include <gtest/gtest.h>

#include <set>

#include "srgraph/error.hpp"
#include "srgraph/oracle.hpp"
#include "srgraph/steiner.hpp"
#include "srgraph/verify.hpp"

namespace srgraph {
namespace {

// Same instance as data/graphs/small_directed.txt.
WeightedDigraph small_directed() {
  WeightedDigraph g;
  g.num_vertices = 5;
  g.arcs = {{0, 1, 2}, {0, 2, 1}, {1, 3, 2}, {2, 3, 4}, {2, 4, 3}, {1, 4, 5}, {3, 4, 1}};
  g.root = 0;
  g.terminals = {0, 3, 4};
  g.degree_bound = {kUnbounded, kUnbounded, kUnbounded, kUnbounded, kUnbounded};
  g.degree_bound[0] = 2;
  return g;
}

TEST(WeightedDigraph, Checks) {
  WeightedDigraph g = small_directed();
  EXPECT_NO_THROW(g.check());
  g.arcs.push_back({1, 1, 1.0});
  EXPECT_THROW(g.check(), StructuralError);
  g = small_directed();
  g.arcs.push_back({0, 1, 7.0});
  EXPECT_THROW(g.check(), StructuralError);
  g = small_directed();
  g.terminals.push_back(9);
  EXPECT_THROW(g.check(), StructuralError);
}

TEST(SolveMin, SmallDirected) {
  const WeightedDigraph g = small_directed();
  const SolveResult r = solve_min_dcsap(g);
  ASSERT_EQ(r.status, SolveStatus::Found);
  // 0->1, 1->3, 3->4
  EXPECT_EQ(r.weight, 5.0);
  EXPECT_EQ(r.weight, *oracle::brute_force_dcsap(g));
  EXPECT_TRUE(g.is_feasible(*r.arborescence));
  EXPECT_EQ(g.weight_of(*r.arborescence), 5.0);
}

TEST(SolveMin, InfeasibleWithoutArcs) {
  WeightedDigraph g;
  g.num_vertices = 2;
  g.root = 0;
  g.terminals = {0, 1};
  EXPECT_EQ(solve_min_dcsap(g).status, SolveStatus::Infeasible);
  EXPECT_FALSE(oracle::brute_force_dcsap(g));
}

TEST(SolveMin, DegreeBoundsBind) {
  // Star from the root is cheapest but the root may keep only one arc.
  WeightedDigraph g;
  g.num_vertices = 3;
  g.arcs = {{0, 1, 1}, {0, 2, 1}, {1, 2, 5}};
  g.terminals = {0, 1, 2};
  g.degree_bound = {1, kUnbounded, kUnbounded};
  EXPECT_EQ(solve_min_dcsap(g).weight, 6.0);
  g.degree_bound = {2, 1, kUnbounded};
  EXPECT_EQ(solve_min_dcsap(g).weight, 2.0);
}

TEST(SolveMin, RandomAgainstOracle) {
  verify::Rng rng(11);
  for (int i = 0; i < 60; ++i) {
    const WeightedDigraph g = verify::random_digraph(5, oracle::kMaxBruteForceArcs, 9, rng);
    const auto expected = oracle::brute_force_dcsap(g);
    const SolveResult got = solve_min_dcsap(g);
    ASSERT_EQ(got.status == SolveStatus::Found, expected.has_value());
    if (expected) EXPECT_EQ(got.weight, *expected);
  }
}

TEST(Decide, ExactlyAndAtMost) {
  const WeightedDigraph g = small_directed();
  const auto weights = oracle::brute_force_dcsap_weights(g);
  for (int eps = 0; eps <= 12; ++eps) {
    const bool achievable = std::binary_search(weights.begin(), weights.end(), double(eps));
    EXPECT_EQ(decide_dcsap(g, eps, 0.0).status == SolveStatus::Found, achievable) << eps;
    EXPECT_EQ(decide_dcsap(g, eps, 0.0, DecideMode::AtMost).status == SolveStatus::Found, eps >= 5) << eps;
  }
  EXPECT_EQ(decide_dcsap(g, 4.6, 0.5).status, SolveStatus::Found);
}

TEST(SolveMin, BudgetIsReported) {
  verify::Rng rng(5);
  verify::random_digraph(12, 36, 9, rng);
  const WeightedDigraph g = verify::random_digraph(12, 36, 9, rng);
  const SolveResult r = solve_min_dcsap(g, 10);
  EXPECT_EQ(r.status, SolveStatus::BudgetExhausted);
  EXPECT_EQ(r.stats.nodes, 10u);
  EXPECT_EQ(solve_min_dcsap(g).status, SolveStatus::Found);
}

SymbolGraphSpec small_spec() {
  SymbolGraphSpec s;
  s.levels = 2;
  s.copies = 2;
  s.variable_copies = 2;
  s.num_variables = 1;
  s.constants = {1.0};
  s.operators = {find_operator("sin"), find_operator("add")};
  return s;
}

TEST(Walker, SymmetryBreakingKeepsExpressionSet) {
  const SymbolGraph g = SymbolGraph::build(small_spec());
  std::set<std::string> with, without;
  WalkOptions opt;
  opt.max_arcs = 7;
  const WalkStats a = enumerate_arborescences(g, opt, [&](const Arborescence& t) {
    with.insert(render(to_expression(g, t)));
    return false;
  });
  opt.symmetry_breaking = false;
  const WalkStats b = enumerate_arborescences(g, opt, [&](const Arborescence& t) {
    without.insert(render(to_expression(g, t)));
    return false;
  });
  EXPECT_EQ(with, without);
  EXPECT_LT(a.trees, b.trees);
  EXPECT_TRUE(a.size_capped);
}

TEST(Walker, EmitsValidTrees) {
  const SymbolGraph g = SymbolGraph::build(small_spec());
  WalkOptions opt;
  opt.required = {g.variable_vertex(0, 0)};
  opt.max_arcs = 6;
  enumerate_arborescences(g, opt, [&](const Arborescence& t) {
    EXPECT_TRUE(validate(g, t, TerminalSet::for_sr(g)).empty());
    EXPECT_EQ(normalize(g, t), t);
    return false;
  });
}

TEST(Walker, BudgetStopsWalk) {
  const SymbolGraph g = SymbolGraph::build(SymbolGraphSpec::with_defaults(2, 2));
  WalkOptions opt;
  opt.budget = 1000;
  const WalkStats s = enumerate_arborescences(g, opt, [](const Arborescence&) { return false; });
  EXPECT_TRUE(s.budget_exhausted);
  EXPECT_EQ(s.expansions, 1000u);
}

Dataset sample(const char* formula, std::size_t rows) {
  verify::Rng rng(1);
  return *verify::with_target(verify::random_inputs(rows, 2, -2.0, 2.0, rng), parse(formula));
}

TEST(SolveSr, FindsPlantedFormula) {
  const SymbolGraph g = SymbolGraph::build(SymbolGraphSpec::with_defaults(2, 2));
  const SrResult r = solve_sr(g, sample("sin(x1 * x2)", 30), SrSearchOptions{});
  ASSERT_TRUE(r.expression);
  EXPECT_EQ(render(*r.expression), "sin(x1 * x2)");
  EXPECT_LE(r.loss, 1e-6);
  EXPECT_TRUE(r.complete);
}

TEST(SolveSr, ThreadsDoNotChangeTheAnswer) {
  const SymbolGraph g = SymbolGraph::build(SymbolGraphSpec::with_defaults(2, 2));
  const Dataset data = sample("sin(x1^2) + x2", 30);
  SrSearchOptions one;
  SrSearchOptions four;
  four.threads = 4;
  const SrResult a = solve_sr(g, data, one);
  const SrResult b = solve_sr(g, data, four);
  ASSERT_TRUE(a.expression && b.expression);
  EXPECT_EQ(render(*a.expression), render(*b.expression));
  EXPECT_EQ(a.loss, b.loss);
  EXPECT_EQ(a.arborescence, b.arborescence);
}

TEST(SolveSr, NoiseExhaustsBudget) {
  const SymbolGraph g = SymbolGraph::build(SymbolGraphSpec::with_defaults(2, 2));
  Dataset data = sample("x1", 20);
  std::vector<double> y(data.rows());
  verify::Rng rng(9);
  for (double& v : y) v = std::uniform_real_distribution<double>(-50, 50)(rng);
  std::vector<double> x;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) x.push_back(data.x(i, j));
  }
  SrSearchOptions opt;
  opt.budget = 20000;
  const SrResult r = solve_sr(g, Dataset(data.rows(), 2, x, y), opt);
  EXPECT_FALSE(r.expression);
  EXPECT_FALSE(r.complete);
  EXPECT_TRUE(r.best);
  EXPECT_LE(r.expansions, 20000u);
}

}  // namespace
}  // namespace srgraph
