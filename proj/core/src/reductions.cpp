#include "srgraph/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srgraph/error.hpp"

namespace srgraph {

void UndirectedGraph::check() const {
  for (const WeightedEdge& e : edges) {
    if (e.u >= num_vertices || e.v >= num_vertices) {
      throw StructuralError("edge endpoint out of range");
    }
    if (e.u == e.v) throw StructuralError("self-loop at vertex " + std::to_string(e.u));
    if (!std::isfinite(e.weight)) throw StructuralError("edge weight must be finite");
  }
  for (VertexId t : terminals) {
    if (t >= num_vertices) throw StructuralError("terminal " + std::to_string(t) + " out of range");
  }
  if (!degree_bound.empty() && degree_bound.size() != num_vertices) {
    throw StructuralError("degree bound list must have one entry per vertex");
  }
}

WeightedDigraph dcstp_to_dcsap(const UndirectedGraph& g, VertexId root) {
  g.check();
  if (std::find(g.terminals.begin(), g.terminals.end(), root) == g.terminals.end()) {
    throw StructuralError("root " + std::to_string(root) + " is not a terminal");
  }
  WeightedDigraph d;
  d.num_vertices = g.num_vertices;
  d.root = root;
  d.terminals = g.terminals;
  d.degree_bound = g.degree_bound;
  d.arcs.reserve(2 * g.edges.size());
  for (const WeightedEdge& e : g.edges) {
    d.arcs.push_back({e.u, e.v, e.weight});
    d.arcs.push_back({e.v, e.u, e.weight});
  }
  return d;
}

BisectResult bisect_min_weight(const std::function<bool(long long)>& oracle, long long lo,
                               long long hi) {
  if (lo > hi) {
    throw StructuralError("bisection range is empty: lo " + std::to_string(lo) + " > hi " +
                          std::to_string(hi));
  }
  BisectResult r;
  auto ask = [&](long long eps) {
    ++r.calls;
    return oracle(eps);
  };
  // Invariant: every eps < lo is a no; if any yes exists in range, one is <= hi.
  long long a = lo;
  long long b = hi;
  while (a < b) {
    const long long mid = a + (b - a) / 2;
    if (ask(mid)) {
      b = mid;
    } else {
      a = mid + 1;
    }
  }
  if (ask(a)) r.minimum = a;
  return r;
}

SymbolDcsapInstance sr_to_dcsap(const SRInstance& inst, int designated_variable) {
  if (inst.dataset.cols() != static_cast<std::size_t>(inst.spec.num_variables)) {
    throw StructuralError("dataset has " + std::to_string(inst.dataset.cols()) +
                          " input columns but the spec has " +
                          std::to_string(inst.spec.num_variables) + " variables");
  }
  if (designated_variable < 0 || designated_variable >= inst.spec.num_variables) {
    throw StructuralError("designated variable out of range");
  }
  SymbolGraph graph = SymbolGraph::build(inst.spec);
  TerminalSet terminals = TerminalSet::for_sr(graph, designated_variable);
  return SymbolDcsapInstance{std::move(graph), std::move(terminals), inst.dataset,
                             inst.dataset.y(), std::max(inst.epsilon, inst.tol)};
}

ReducedDecision sr_decide_via_dcsap(const SRInstance& inst, std::uint64_t budget) {
  ReducedDecision out;
  for (int v = 0; v < inst.spec.num_variables; ++v) {
    SymbolDcsapInstance reduced = sr_to_dcsap(inst, v);
    auto r = decide_symbol_dcsap(reduced.graph, reduced.terminals, reduced.data, reduced.target,
                                 reduced.tol, budget);
    if (!r.complete) out.complete = false;
    if (r.arborescence) {
      out.yes = true;
      out.expression = to_expression(reduced.graph, *r.arborescence);
      out.designated_variable = v;
      return out;
    }
  }
  return out;
}

}  // namespace srgraph
