#pragma once

#include <string>
#include <vector>

#include "srgraph/symbol_graph.hpp"

namespace srgraph {

/// Vertices every valid solution must contain.
struct TerminalSet {
  std::vector<VertexId> vertices;

  /// {Root, copy 0 of the given variable}.
  static TerminalSet for_sr(const SymbolGraph& graph, int variable = 0);
};

enum class ViolationKind {
  DuplicateArc,
  ArcIntoRoot,
  MultipleParents,
  Unreachable,
  Cycle,
  MissingTerminal,
  DegreeMismatch,
  RootDegreeExceeded,
};

struct Violation {
  ViolationKind kind;
  VertexId vertex;
  std::string message;
};

/// Checks tree shape, terminal coverage and per-vertex degree rules. Arcs that
/// are not in the graph are a StructuralError rather than a violation.
std::vector<Violation> validate(const SymbolGraph& graph, const Arborescence& arb,
                                const TerminalSet& terminals);

/// Decodes an arborescence into its expression (always in canonical form).
Expression to_expression(const SymbolGraph& graph, const Arborescence& arb);

/// Rewrites the arc list into canonical preorder: children of commutative
/// vertices sorted by id, argument order kept for the rest.
Arborescence normalize(const SymbolGraph& graph, const Arborescence& arb);

/// Telescoped weight of one arc. The arc entering vertex v carries
/// value(v) - sum(values of v's children); leaf arcs carry the leaf value.
/// The weight is kept as an unevaluated pair hi + lo so nothing is lost to
/// rounding when value(v) and its children's sum are large and close.
struct ArcWeight {
  Arc arc;
  double hi;
  double lo;

  double value() const { return hi + lo; }
};

struct EdgeWeightReport {
  std::vector<ArcWeight> weights;  // same order as the arborescence's arcs
  double total = 0.0;              // compensated sum of every hi and lo part
  bool defined = true;             // false if any operator evaluation was undefined
};

EdgeWeightReport edge_weights(const SymbolGraph& graph, const Arborescence& arb,
                              std::span<const double> row);

/// DOT export of the whole graph with the arborescence's arcs highlighted.
std::string to_dot(const SymbolGraph& graph, const Arborescence& arb);
std::string to_json(const EdgeWeightReport& report);
std::string to_json(const Arborescence& arb);

}  // namespace srgraph
