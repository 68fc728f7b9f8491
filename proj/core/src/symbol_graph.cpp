#include "srgraph/symbol_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "json_util.hpp"
#include "srgraph/error.hpp"

namespace srgraph {

SymbolGraphSpec SymbolGraphSpec::with_defaults(int levels, int num_variables) {
  SymbolGraphSpec spec;
  spec.levels = levels;
  spec.num_variables = num_variables;
  spec.constants = {1.0, 2.0, std::numbers::pi, std::numbers::e};
  auto ops = default_operators();
  spec.operators.assign(ops.begin(), ops.end());
  return spec;
}

void SymbolGraphSpec::check() const {
  if (levels < 1) throw StructuralError("spec field 'levels' must be >= 1");
  if (copies < 1) throw StructuralError("spec field 'copies' must be >= 1");
  if (variable_copies < 1) throw StructuralError("spec field 'variable_copies' must be >= 1");
  if (num_variables < 1) throw StructuralError("spec field 'variables' must be >= 1");
  std::set<double> seen_constants;
  for (double c : constants) {
    if (!std::isfinite(c)) throw StructuralError("spec field 'constants' must be finite");
    if (!seen_constants.insert(c).second) {
      throw StructuralError("spec field 'constants' has a duplicate value");
    }
  }
  std::set<std::string_view> names;
  for (const OperatorDef* op : operators) {
    if (op == nullptr) throw StructuralError("spec field 'operators' has a null entry");
    if (op->arity < 1 || op->arity > 3) {
      throw StructuralError("spec field 'operators': arity must be 1, 2 or 3");
    }
    if (!names.insert(op->name).second) {
      throw StructuralError("spec field 'operators' has duplicate operator '" +
                            std::string(op->name) + "'");
    }
  }
}

SymbolGraph SymbolGraph::build(SymbolGraphSpec spec) {
  spec.check();
  SymbolGraph g;
  g.spec_ = std::move(spec);
  const auto& s = g.spec_;
  const int num_ops = static_cast<int>(s.operators.size());
  const int leaf_level = s.levels + 1;

  g.vertices_.push_back(Vertex{});
  g.symmetry_class_.push_back(-1);
  for (int t = 1; t <= s.levels; ++t) {
    for (int i = 0; i < num_ops; ++i) {
      for (int c = 0; c < s.copies; ++c) {
        Vertex v;
        v.kind = VertexKind::Operator;
        v.level = t;
        v.op = s.operators[i];
        v.op_index = i;
        v.copy = c;
        g.vertices_.push_back(v);
        g.symmetry_class_.push_back((t - 1) * num_ops + i);
      }
    }
  }
  g.leaves_begin_ = static_cast<VertexId>(g.vertices_.size());
  for (int j = 0; j < s.num_variables; ++j) {
    for (int c = 0; c < s.variable_copies; ++c) {
      Vertex v;
      v.kind = VertexKind::Variable;
      v.level = leaf_level;
      v.variable = j;
      v.copy = c;
      g.vertices_.push_back(v);
      g.symmetry_class_.push_back(s.levels * num_ops + j);
    }
  }
  for (std::size_t i = 0; i < s.constants.size(); ++i) {
    Vertex v;
    v.kind = VertexKind::Constant;
    v.level = leaf_level;
    v.constant_index = static_cast<int>(i);
    v.value = s.constants[i];
    g.vertices_.push_back(v);
    g.symmetry_class_.push_back(-1);
  }
  g.num_classes_ = s.levels * num_ops + s.num_variables;

  const auto n = static_cast<VertexId>(g.vertices_.size());
  const auto level_begin = [&](int t) {
    return static_cast<VertexId>(1 + (t - 1) * num_ops * s.copies);
  };
  g.out_begin_.assign(n + 1, 0);
  for (VertexId u = 0; u < n; ++u) {
    g.out_begin_[u] = g.out_targets_.size();
    const Vertex& vu = g.vertices_[u];
    if (vu.kind == VertexKind::Variable || vu.kind == VertexKind::Constant) continue;
    const int next = vu.level + 1;
    if (next <= s.levels) {
      for (VertexId w = level_begin(next); w < level_begin(next + 1); ++w) {
        g.out_targets_.push_back(w);
      }
    }
    for (VertexId w = g.leaves_begin_; w < n; ++w) g.out_targets_.push_back(w);
  }
  g.out_begin_[n] = g.out_targets_.size();
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId w : g.out_neighbors(u)) g.arcs_.push_back({u, w});
  }

  g.degree_bound_.resize(n);
  const int level1 = num_ops * s.copies;
  const int leaves = static_cast<int>(n - g.leaves_begin_);
  for (VertexId v = 0; v < n; ++v) {
    switch (g.vertices_[v].kind) {
      case VertexKind::Root:
        g.degree_bound_[v] = level1 + leaves;
        break;
      case VertexKind::Operator:
        g.degree_bound_[v] = g.vertices_[v].op->arity;
        break;
      default:
        g.degree_bound_[v] = 0;
    }
  }
  return g;
}

std::span<const VertexId> SymbolGraph::out_neighbors(VertexId v) const {
  return std::span<const VertexId>(out_targets_).subspan(out_begin_.at(v),
                                                         out_begin_[v + 1] - out_begin_[v]);
}

bool SymbolGraph::has_arc(VertexId from, VertexId to) const {
  if (from >= vertices_.size() || to >= vertices_.size()) return false;
  auto out = out_neighbors(from);
  return std::binary_search(out.begin(), out.end(), to);
}

ArcKind SymbolGraph::arc_kind(VertexId to) const {
  switch (vertex(to).kind) {
    case VertexKind::Variable:
      return ArcKind::Variable;
    case VertexKind::Constant:
      return ArcKind::Constant;
    default:
      return ArcKind::Operator;
  }
}

bool SymbolGraph::commutative(VertexId v) const {
  const Vertex& x = vertex(v);
  if (x.kind == VertexKind::Root) return true;
  return x.kind == VertexKind::Operator && x.op->commutative;
}

VertexId SymbolGraph::operator_vertex(int level, int op_index, int copy) const {
  const int num_ops = static_cast<int>(spec_.operators.size());
  if (level < 1 || level > spec_.levels || op_index < 0 || op_index >= num_ops || copy < 0 ||
      copy >= spec_.copies) {
    throw StructuralError("operator vertex out of range");
  }
  return static_cast<VertexId>(1 + ((level - 1) * num_ops + op_index) * spec_.copies + copy);
}

VertexId SymbolGraph::variable_vertex(int variable, int copy) const {
  if (variable < 0 || variable >= spec_.num_variables || copy < 0 ||
      copy >= spec_.variable_copies) {
    throw StructuralError("variable vertex out of range");
  }
  return leaves_begin_ + static_cast<VertexId>(variable * spec_.variable_copies + copy);
}

VertexId SymbolGraph::constant_vertex(int index) const {
  if (index < 0 || index >= static_cast<int>(spec_.constants.size())) {
    throw StructuralError("constant vertex out of range");
  }
  return leaves_begin_ +
         static_cast<VertexId>(spec_.num_variables * spec_.variable_copies + index);
}

std::string SymbolGraph::label(VertexId v) const {
  const Vertex& x = vertex(v);
  switch (x.kind) {
    case VertexKind::Root:
      return "sum";
    case VertexKind::Operator:
      return std::string(x.op->symbol) + "@" + std::to_string(x.level) + "#" +
             std::to_string(x.copy);
    case VertexKind::Variable:
      return "x" + std::to_string(x.variable + 1) + "#" + std::to_string(x.copy);
    case VertexKind::Constant:
      return render(Expression::constant(x.value));
  }
  return {};
}

namespace {

struct EmbedNode {
  VertexId vertex;
  std::vector<EmbedNode> children;
};

class Embedder {
 public:
  explicit Embedder(const SymbolGraph& g)
      : g_(g), next_copy_(g.num_symmetry_classes(), 0), constant_used_(g.spec().constants.size()) {}

  std::optional<EmbedNode> place(const Expression& e, int level) {
    const auto& spec = g_.spec();
    switch (e.kind()) {
      case Expression::Kind::Variable: {
        const int j = static_cast<int>(e.index());
        const VertexId first = g_.variable_vertex(j, 0);
        int& next = next_copy_[g_.symmetry_class(first)];
        if (next >= spec.variable_copies) {
          return fail(EmbedFailure::Copies, "variable x" + std::to_string(j + 1) + " used more than " +
                                                std::to_string(spec.variable_copies) + " times");
        }
        return EmbedNode{g_.variable_vertex(j, next++), {}};
      }
      case Expression::Kind::Constant: {
        for (std::size_t i = 0; i < spec.constants.size(); ++i) {
          if (spec.constants[i] != e.value()) continue;
          if (constant_used_[i]) {
            return fail(EmbedFailure::Copies, "constant " + render(e) + " used more than once");
          }
          constant_used_[i] = true;
          return EmbedNode{g_.constant_vertex(static_cast<int>(i)), {}};
        }
        return fail(EmbedFailure::Constant, "constant " + render(e) + " is not in the graph");
      }
      case Expression::Kind::Apply: {
        const int op_index = operator_index(e.op());
        const VertexId first = g_.operator_vertex(level, op_index, 0);
        int& next = next_copy_[g_.symmetry_class(first)];
        if (next >= spec.copies) {
          return fail(EmbedFailure::Copies, "operator " + std::string(e.op().name) + " at level " +
                                                std::to_string(level) + " needs more than " +
                                                std::to_string(spec.copies) + " copies");
        }
        EmbedNode node{g_.operator_vertex(level, op_index, next++), {}};
        for (const auto& c : e.children()) {
          auto child = place(c, level + 1);
          if (!child) return std::nullopt;
          node.children.push_back(std::move(*child));
        }
        return node;
      }
      case Expression::Kind::TopSum:
        break;
    }
    throw StructuralError("TopSum below the root");
  }

  int operator_index(const OperatorDef& op) const {
    const auto& ops = g_.spec().operators;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (ops[i] == &op) return static_cast<int>(i);
    }
    throw StructuralError("operator '" + std::string(op.name) + "' is not in the symbol graph");
  }

  std::optional<EmbedNode> fail(EmbedFailure f, std::string detail) {
    failure = f;
    this->detail = std::move(detail);
    return std::nullopt;
  }

  EmbedFailure failure = EmbedFailure::None;
  std::string detail;

 private:
  const SymbolGraph& g_;
  std::vector<int> next_copy_;
  std::vector<bool> constant_used_;
};

void check_symbols(const SymbolGraph& g, const Expression& e) {
  if (e.kind() == Expression::Kind::Apply) {
    const auto& ops = g.spec().operators;
    if (std::find(ops.begin(), ops.end(), &e.op()) == ops.end()) {
      throw StructuralError("operator '" + std::string(e.op().name) +
                            "' is not in the symbol graph");
    }
  }
  if (e.kind() == Expression::Kind::Variable &&
      e.index() >= static_cast<std::size_t>(g.spec().num_variables)) {
    throw StructuralError("variable x" + std::to_string(e.index() + 1) +
                          " is not in the symbol graph");
  }
  for (const auto& c : e.children()) check_symbols(g, c);
}

void emit_preorder(const SymbolGraph& g, EmbedNode& node, std::vector<Arc>& arcs) {
  if (g.commutative(node.vertex)) {
    std::sort(node.children.begin(), node.children.end(),
              [](const EmbedNode& a, const EmbedNode& b) { return a.vertex < b.vertex; });
  }
  for (auto& c : node.children) {
    arcs.push_back({node.vertex, c.vertex});
    emit_preorder(g, c, arcs);
  }
}

}  // namespace

EmbedResult embed(const SymbolGraph& graph, const Expression& expr) {
  Expression c = canonical(expr.kind() == Expression::Kind::TopSum
                               ? expr
                               : Expression::top_sum({expr}));
  check_symbols(graph, c);
  EmbedResult result;
  if (c.operator_depth() > graph.spec().levels) {
    result.failure = EmbedFailure::Depth;
    result.detail = "operator depth " + std::to_string(c.operator_depth()) + " exceeds " +
                    std::to_string(graph.spec().levels) + " levels";
    return result;
  }
  Embedder embedder(graph);
  EmbedNode root{graph.root(), {}};
  for (const auto& child : c.children()) {
    auto node = embedder.place(child, 1);
    if (!node) {
      result.failure = embedder.failure;
      result.detail = embedder.detail;
      return result;
    }
    root.children.push_back(std::move(*node));
  }
  Arborescence arb;
  arb.root = graph.root();
  emit_preorder(graph, root, arb.arcs);
  result.arborescence = std::move(arb);
  return result;
}

std::string_view to_string(EmbedFailure failure) {
  switch (failure) {
    case EmbedFailure::None:
      return "none";
    case EmbedFailure::Depth:
      return "depth";
    case EmbedFailure::Copies:
      return "copies";
    case EmbedFailure::Constant:
      return "constant";
  }
  return "unknown";
}

std::string to_dot(const SymbolGraph& graph) {
  std::ostringstream out;
  out << "digraph symbol_graph {\n";
  out << "  rankdir=TB;\n";
  const auto& s = graph.spec();
  for (VertexId v = 0; v < graph.num_vertices(); ++v) {
    const Vertex& x = graph.vertex(v);
    const char* shape = x.kind == VertexKind::Root       ? "diamond"
                        : x.kind == VertexKind::Operator ? "ellipse"
                                                         : "box";
    out << "  v" << v << " [label=\"" << graph.label(v) << "\", shape=" << shape << "];\n";
  }
  for (int layer = 0; layer <= s.levels + 1; ++layer) {
    out << "  { rank=same;";
    for (VertexId v = 0; v < graph.num_vertices(); ++v) {
      if (graph.vertex(v).level == layer) out << " v" << v << ";";
    }
    out << " }\n";
  }
  for (const Arc& a : graph.arcs()) out << "  v" << a.from << " -> v" << a.to << ";\n";
  out << "}\n";
  return out.str();
}

std::string to_json(const SymbolGraph& graph) {
  using nlohmann::json;
  json doc;
  doc["schema_version"] = 1;
  doc["spec"] = detail::spec_to_json(graph.spec());
  json vertices = json::array();
  for (VertexId v = 0; v < graph.num_vertices(); ++v) {
    const Vertex& x = graph.vertex(v);
    json jv;
    jv["id"] = v;
    jv["level"] = x.level;
    jv["label"] = graph.label(v);
    jv["degree_bound"] = graph.degree_bound(v);
    switch (x.kind) {
      case VertexKind::Root:
        jv["kind"] = "root";
        break;
      case VertexKind::Operator:
        jv["kind"] = "operator";
        jv["operator"] = std::string(x.op->name);
        jv["copy"] = x.copy;
        break;
      case VertexKind::Variable:
        jv["kind"] = "variable";
        jv["variable"] = x.variable;
        jv["copy"] = x.copy;
        break;
      case VertexKind::Constant:
        jv["kind"] = "constant";
        jv["value"] = x.value;
        break;
    }
    json out = json::array();
    for (VertexId w : graph.out_neighbors(v)) out.push_back(w);
    jv["out"] = std::move(out);
    vertices.push_back(std::move(jv));
  }
  doc["vertices"] = std::move(vertices);
  json arcs = json::array();
  for (const Arc& a : graph.arcs()) {
    const ArcKind k = graph.arc_kind(a.to);
    arcs.push_back({{"from", a.from},
                    {"to", a.to},
                    {"set", k == ArcKind::Operator   ? "E_op"
                            : k == ArcKind::Variable ? "E_x"
                                                     : "E_c"}});
  }
  doc["arcs"] = std::move(arcs);
  return doc.dump(2) + "\n";
}

}  // namespace srgraph
