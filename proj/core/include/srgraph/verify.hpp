#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srgraph/reductions.hpp"
#include "srgraph/steiner.hpp"
#include "srgraph/symbol_graph.hpp"

namespace srgraph::verify {

using Rng = std::mt19937_64;

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // first few failures
  double seconds = 0.0;

  bool passed() const { return cases > 0 && failures == 0; }
  void fail(std::string message);
};

/// telescoping, bijection, arc-doubling, bisection, sr-reduction, solver-oracle.
std::span<const std::string_view> suite_names();

/// Throws StructuralError for an unknown suite name.
SuiteReport run_suite(std::string_view name, std::uint64_t seed);

std::string to_json(const SuiteReport& report);

// Generators shared by the suites, tests and benchmarks.

/// Small specs whose symbol graphs have at most 500 arborescences.
std::vector<SymbolGraphSpec> spec_battery();

/// Random degree-feasible arborescence containing a variable, in canonical preorder.
Arborescence random_arborescence(const SymbolGraph& graph, Rng& rng);

/// n rows of inputs drawn uniformly from [lo, hi]; Y left at zero.
Dataset random_inputs(std::size_t rows, std::size_t cols, double lo, double hi, Rng& rng);

/// Same inputs with Y replaced by f(X); nullopt if f is undefined on some row.
std::optional<Dataset> with_target(const Dataset& inputs, const Expression& f);

/// Connected graph on n vertices, integer weights in [1, max_weight], random
/// terminals and occasional degree bounds.
UndirectedGraph random_connected_graph(std::size_t n, int max_weight, Rng& rng);

/// Random digraph on n vertices with at most max_arcs arcs, integer weights in
/// [1, max_weight], random terminals and occasional degree bounds.
WeightedDigraph random_digraph(std::size_t n, std::size_t max_arcs, int max_weight, Rng& rng);

}  // namespace srgraph::verify
