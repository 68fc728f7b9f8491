#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "srgraph/arborescence.hpp"
#include "srgraph/expr.hpp"
#include "srgraph/symbol_graph.hpp"

namespace srgraph {

inline constexpr int kUnbounded = std::numeric_limits<int>::max();

struct WeightedArc {
  VertexId from;
  VertexId to;
  double weight;
};

/// Digraph with static real arc weights. Degree bounds limit the total degree
/// (in plus out) a vertex may have in the tree.
struct WeightedDigraph {
  std::size_t num_vertices = 0;
  std::vector<WeightedArc> arcs;
  VertexId root = 0;
  std::vector<VertexId> terminals;
  std::vector<int> degree_bound;  // empty means unbounded everywhere

  int bound(VertexId v) const { return degree_bound.empty() ? kUnbounded : degree_bound[v]; }
  /// Root and terminals in range, finite weights, no self-loops or parallel arcs.
  void check() const;
  /// Sum of arc weights of `arb`; StructuralError if an arc is missing.
  double weight_of(const Arborescence& arb) const;
  /// True when `arb` is a degree-feasible arborescence rooted at `root` that
  /// spans every terminal.
  bool is_feasible(const Arborescence& arb) const;
};

struct SolveStats {
  std::uint64_t nodes = 0;
  std::uint64_t prunes = 0;
  double wall_seconds = 0.0;
};

enum class SolveStatus { Found, Infeasible, BudgetExhausted };

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Arborescence> arborescence;  // best-so-far when the budget ran out
  double weight = 0.0;
  SolveStats stats;
};

/// Minimum-weight degree-constrained arborescence by branch and bound over arc
/// inclusion. Exact unless the node budget runs out.
SolveResult solve_min_dcsap(const WeightedDigraph& g,
                            std::uint64_t budget = std::numeric_limits<std::uint64_t>::max());

enum class DecideMode { Exactly, AtMost };

struct DecideResult {
  SolveStatus status = SolveStatus::Infeasible;  // Found, Infeasible (= none), BudgetExhausted
  std::optional<Arborescence> arborescence;
  double weight = 0.0;
  SolveStats stats;
};

/// Exactly: some arborescence has |W - epsilon| <= tol. AtMost: some
/// arborescence has W <= epsilon + tol.
DecideResult decide_dcsap(const WeightedDigraph& g, double epsilon, double tol,
                          DecideMode mode = DecideMode::Exactly,
                          std::uint64_t budget = std::numeric_limits<std::uint64_t>::max());

// ---------------------------------------------------------------------------
// Search over symbol graphs.

struct WalkOptions {
  bool symmetry_breaking = true;
  std::vector<VertexId> required;  // vertices every emitted tree must contain
  std::size_t min_arcs = 1;
  std::size_t max_arcs = std::numeric_limits<std::size_t>::max();
  std::uint64_t budget = std::numeric_limits<std::uint64_t>::max();
};

struct WalkStats {
  std::uint64_t expansions = 0;
  std::uint64_t trees = 0;
  bool budget_exhausted = false;
  bool stopped = false;
  /// Some extension was skipped only because of max_arcs, so larger trees exist.
  bool size_capped = false;
};

/// Depth-first, arc-by-arc enumeration of degree-constrained arborescences
/// that contain at least one variable vertex. Trees are emitted in canonical
/// preorder form. With symmetry breaking only the lowest unused copy of an
/// operator/variable class may be newly selected. The callback returns true to
/// stop the walk.
WalkStats enumerate_arborescences(const SymbolGraph& graph, const WalkOptions& options,
                                  const std::function<bool(const Arborescence&)>& on_tree);

struct SrSearchOptions {
  LossKind loss = LossKind::MaxAbs;
  double epsilon = 0.0;
  double tol = 1e-6;  // accepted loss is max(epsilon, tol)
  std::uint64_t budget = 50'000'000;
  int threads = 1;
  bool symmetry_breaking = true;
};

struct SrResult {
  std::optional<Expression> expression;  // first expression with loss <= max(epsilon, tol)
  std::optional<Arborescence> arborescence;
  double loss = std::numeric_limits<double>::infinity();
  std::optional<Expression> best;  // best incumbent seen, whether or not accepted
  double best_loss = std::numeric_limits<double>::infinity();
  bool complete = true;            // false when the budget ran out first
  std::uint64_t expansions = 0;
  std::uint64_t trees = 0;
  double wall_seconds = 0.0;
};

/// SR-Dec by search: trees are explored in increasing arc count; the answer is
/// the expression with fewest arcs, then smallest rendering, whose loss is
/// within the threshold.
SrResult solve_sr(const SymbolGraph& graph, const Dataset& data, const SrSearchOptions& options);

/// DCSAP-Dec on a symbol graph with row-wise telescoped weights: finds an
/// arborescence containing the terminals whose weight total matches the target
/// on every row within `tol`.
struct SymbolDecideResult {
  std::optional<Arborescence> arborescence;
  bool complete = true;
  std::uint64_t expansions = 0;
};

SymbolDecideResult decide_symbol_dcsap(const SymbolGraph& graph, const TerminalSet& terminals,
                                       const Dataset& data, std::span<const double> target,
                                       double tol, std::uint64_t budget = 50'000'000);

std::string to_json(const SolveResult& result, std::string_view kind);
std::string_view to_string(SolveStatus status);

}  // namespace srgraph
