#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srgraph/expr.hpp"

namespace srgraph {

using VertexId = std::uint32_t;

struct Arc {
  VertexId from;
  VertexId to;

  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// A directed tree given by its arcs. For symbol graphs the order of a
/// vertex's out-arcs is its argument order; producers in this library emit
/// arcs in preorder with the children of commutative vertices sorted by id.
struct Arborescence {
  VertexId root = 0;
  std::vector<Arc> arcs;

  friend bool operator==(const Arborescence&, const Arborescence&) = default;
};

struct SymbolGraphSpec {
  int levels = 1;
  int copies = 2;           // p: interchangeable copies of each operator per level
  int variable_copies = 2;  // k: copies of each variable vertex
  int num_variables = 1;    // d
  std::vector<double> constants;
  std::vector<const OperatorDef*> operators;

  /// Defaults: k = 2, p = 2, constants {1, 2, pi, e}, the full default operator set.
  static SymbolGraphSpec with_defaults(int levels, int num_variables);

  /// Throws StructuralError naming the offending field.
  void check() const;
};

enum class VertexKind { Root, Operator, Variable, Constant };
enum class ArcKind { Operator, Variable, Constant };  // E_op, E_x, E_c

struct Vertex {
  VertexKind kind = VertexKind::Root;
  int level = 0;  // 0 for the root, 1..l for operators, l + 1 for leaves
  const OperatorDef* op = nullptr;
  int op_index = -1;
  int copy = 0;
  int variable = -1;
  int constant_index = -1;
  double value = 0.0;
};

/// The layered digraph whose degree-constrained arborescences are the
/// expressions of the search space. Immutable after build.
///
/// Vertex numbering is layer-major: the root is 0, then operator copies level
/// by level (operator order, then copy index), then variable copies, then
/// constants.
class SymbolGraph {
 public:
  static SymbolGraph build(SymbolGraphSpec spec);

  const SymbolGraphSpec& spec() const { return spec_; }
  VertexId root() const { return 0; }
  std::size_t num_vertices() const { return vertices_.size(); }
  const Vertex& vertex(VertexId v) const { return vertices_.at(v); }
  std::span<const Vertex> vertices() const { return vertices_; }

  /// Out-neighbours sorted by id.
  std::span<const VertexId> out_neighbors(VertexId v) const;
  /// All arcs sorted by (from, to).
  std::span<const Arc> arcs() const { return arcs_; }
  bool has_arc(VertexId from, VertexId to) const;
  ArcKind arc_kind(VertexId to) const;

  /// Root: s (number of level-1 vertices plus leaves), operator: arity, leaf: 0.
  int degree_bound(VertexId v) const { return degree_bound_.at(v); }
  bool commutative(VertexId v) const;

  VertexId operator_vertex(int level, int op_index, int copy) const;
  VertexId variable_vertex(int variable, int copy) const;
  VertexId constant_vertex(int index) const;
  VertexId leaves_begin() const { return leaves_begin_; }

  /// Symmetry class of a vertex: operator copies share a class per (level,
  /// operator), variable copies per variable. Root and constants have none (-1).
  int symmetry_class(VertexId v) const { return symmetry_class_.at(v); }
  int num_symmetry_classes() const { return num_classes_; }

  std::string label(VertexId v) const;

 private:
  SymbolGraphSpec spec_;
  std::vector<Vertex> vertices_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> out_begin_;
  std::vector<VertexId> out_targets_;
  std::vector<int> degree_bound_;
  std::vector<int> symmetry_class_;
  int num_classes_ = 0;
  VertexId leaves_begin_ = 0;
};

/// Number of degree-constrained arborescences rooted at the root that contain
/// at least one variable vertex. With `modulo_copy_symmetry` the count is of
/// orbits under permutation of interchangeable copies, i.e. of distinct
/// canonical expressions. The raw count is polynomial in the spec size; the
/// symmetric count is exponential in the number of copy classes and throws
/// StructuralError when it outgrows its working limit.
boost::multiprecision::cpp_int count_arborescences(const SymbolGraphSpec& spec,
                                                   bool modulo_copy_symmetry);

enum class EmbedFailure { None, Depth, Copies, Constant };

struct EmbedResult {
  std::optional<Arborescence> arborescence;
  EmbedFailure failure = EmbedFailure::None;
  std::string detail;

  explicit operator bool() const { return arborescence.has_value(); }
};

/// Canonical embedding: the expression is canonicalized, then every node claims
/// the lowest-index unused copy at its level in preorder.
EmbedResult embed(const SymbolGraph& graph, const Expression& expr);

std::string to_dot(const SymbolGraph& graph);
std::string to_json(const SymbolGraph& graph);

std::string_view to_string(EmbedFailure failure);

}  // namespace srgraph
