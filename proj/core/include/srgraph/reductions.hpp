#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "srgraph/arborescence.hpp"
#include "srgraph/steiner.hpp"
#include "srgraph/symbol_graph.hpp"

namespace srgraph {

struct WeightedEdge {
  VertexId u;
  VertexId v;
  double weight;
};

/// Undirected graph for the Steiner tree setting. Degree bounds limit the
/// degree of a vertex in the tree.
struct UndirectedGraph {
  std::size_t num_vertices = 0;
  std::vector<WeightedEdge> edges;
  std::vector<VertexId> terminals;
  std::vector<int> degree_bound;  // empty means unbounded everywhere

  int bound(VertexId v) const { return degree_bound.empty() ? kUnbounded : degree_bound[v]; }
  void check() const;
};

/// Replaces every edge {u, v} by the arcs u->v and v->u with the edge's weight.
/// `root` must be a terminal.
WeightedDigraph dcstp_to_dcsap(const UndirectedGraph& g, VertexId root);

struct BisectResult {
  std::optional<long long> minimum;
  int calls = 0;
};

/// Least eps in [lo, hi] for which the monotone oracle ("is there a solution
/// of weight <= eps?") says yes. Uses at most ceil(log2(hi - lo + 1)) + 1 calls.
BisectResult bisect_min_weight(const std::function<bool(long long)>& oracle, long long lo,
                               long long hi);

struct SRInstance {
  Dataset dataset;
  SymbolGraphSpec spec;
  double epsilon = 0.0;
  double tol = 1e-6;
  LossKind loss = LossKind::MaxAbs;
};

/// DCSAP-Dec instance on a symbol graph: weights depend on the row of X, and a
/// tree matches when its weight total equals Y on every row within `tol`.
struct SymbolDcsapInstance {
  SymbolGraph graph;
  TerminalSet terminals;
  Dataset data;
  std::vector<double> target;
  double tol;
};

/// Builds the symbol graph with terminals {root, copy 0 of the designated
/// variable}, target Y and tolerance max(epsilon, tol).
SymbolDcsapInstance sr_to_dcsap(const SRInstance& inst, int designated_variable = 0);

struct ReducedDecision {
  bool yes = false;
  bool complete = true;
  std::optional<Expression> expression;  // decoded witness
  int designated_variable = -1;
};

/// SR-Dec answered through DCSAP-Dec: one reduced instance per designated
/// variable, yes if any of them has a matching arborescence.
ReducedDecision sr_decide_via_dcsap(const SRInstance& inst,
                                    std::uint64_t budget = 50'000'000);

}  // namespace srgraph
