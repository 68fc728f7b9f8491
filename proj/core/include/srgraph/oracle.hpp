#pragma once

// Exhaustive reference implementations for small instances. They use
// different algorithms from the solvers on purpose (grammar recursion instead
// of graph walks, subset enumeration instead of branch and bound).

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <vector>

#include "srgraph/expr.hpp"
#include "srgraph/reductions.hpp"
#include "srgraph/steiner.hpp"
#include "srgraph/symbol_graph.hpp"

namespace srgraph::oracle {

struct EnumerationBudget {
  std::size_t max_items = 1'000'000;
  std::size_t max_vertices = 24;  // parent-function enumeration cap
};

struct ExpressionStream {
  std::vector<Expression> expressions;  // canonical, sorted by (arc count, rendering)
  bool truncated = false;
};

/// Every expression representable in the symbol graph of `spec`, once each.
ExpressionStream enumerate_expressions(const SymbolGraphSpec& spec,
                                       const EnumerationBudget& budget = {});

struct SrBest {
  std::optional<Expression> expression;
  double loss = std::numeric_limits<double>::infinity();
  bool found = false;     // loss <= max(epsilon, tol)
  bool complete = true;
};

/// Minimum loss over all representable expressions. Ties go to fewer arcs,
/// then the smaller rendering.
SrBest brute_force_sr(const SRInstance& inst, const EnumerationBudget& budget = {});

inline constexpr std::size_t kMaxBruteForceArcs = 20;

/// Minimum weight of a degree-feasible arborescence spanning the terminals, or
/// nullopt if none exists. Throws StructuralError above kMaxBruteForceArcs arcs.
std::optional<double> brute_force_dcsap(const WeightedDigraph& g);

/// Every achievable arborescence weight, sorted and deduplicated.
std::vector<double> brute_force_dcsap_weights(const WeightedDigraph& g);

/// Minimum weight of a degree-feasible tree containing the terminals, by edge
/// subset enumeration.
std::optional<double> brute_force_dcstp(const UndirectedGraph& g);

/// Arborescence count of the symbol graph by parent-function enumeration.
/// Raw mode counts argument orders of non-commutative operators; symmetric mode
/// counts distinct decoded expressions.
boost::multiprecision::cpp_int brute_force_count(const SymbolGraphSpec& spec, bool modulo_copy_symmetry,
                                                 const EnumerationBudget& budget = {});

}  // namespace srgraph::oracle
