#include "srgraph/arborescence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "json_util.hpp"
#include "srgraph/error.hpp"
#include "srgraph/numeric.hpp"

namespace srgraph {

TerminalSet TerminalSet::for_sr(const SymbolGraph& graph, int variable) {
  return TerminalSet{{graph.root(), graph.variable_vertex(variable, 0)}};
}

namespace {

// Children lists in arc order.
std::vector<std::vector<VertexId>> children_of(const SymbolGraph& g, const Arborescence& arb) {
  std::vector<std::vector<VertexId>> kids(g.num_vertices());
  for (const Arc& a : arb.arcs) kids[a.from].push_back(a.to);
  return kids;
}

void check_arcs(const SymbolGraph& g, const Arborescence& arb) {
  if (arb.root >= g.num_vertices()) throw StructuralError("arborescence root is not a vertex");
  for (const Arc& a : arb.arcs) {
    if (!g.has_arc(a.from, a.to)) {
      throw StructuralError("arc " + std::to_string(a.from) + "->" + std::to_string(a.to) +
                            " is not in the symbol graph");
    }
  }
}

void require_valid(const SymbolGraph& g, const Arborescence& arb) {
  if (arb.root != g.root()) throw StructuralError("arborescence must be rooted at the root vertex");
  auto violations = validate(g, arb, TerminalSet{{g.root()}});
  if (!violations.empty()) {
    throw StructuralError("invalid arborescence: " + violations.front().message);
  }
}

Expression build_expression(const SymbolGraph& g, const std::vector<std::vector<VertexId>>& kids,
                            VertexId v) {
  const Vertex& x = g.vertex(v);
  switch (x.kind) {
    case VertexKind::Variable:
      return Expression::variable(static_cast<std::size_t>(x.variable));
    case VertexKind::Constant:
      return Expression::constant(x.value);
    case VertexKind::Operator:
    case VertexKind::Root: {
      std::vector<Expression> children;
      for (VertexId c : kids[v]) children.push_back(build_expression(g, kids, c));
      if (x.kind == VertexKind::Root) return Expression::top_sum(std::move(children));
      return Expression::apply(*x.op, std::move(children));
    }
  }
  throw StructuralError("unknown vertex kind");
}

struct Valued {
  double value;
  bool defined;
};

// Fills weights for the subtree below v and returns value(v).
Valued weigh(const SymbolGraph& g, const std::vector<std::vector<VertexId>>& kids, VertexId v,
             std::span<const double> row, std::vector<std::array<double, 2>>& arc_weight) {
  const Vertex& x = g.vertex(v);
  if (x.kind == VertexKind::Variable) {
    arc_weight[v] = {row[x.variable], 0.0};
    return {row[x.variable], true};
  }
  if (x.kind == VertexKind::Constant) {
    arc_weight[v] = {x.value, 0.0};
    return {x.value, true};
  }
  std::array<double, 3> args{};
  bool defined = true;
  for (std::size_t i = 0; i < kids[v].size(); ++i) {
    Valued c = weigh(g, kids, kids[v][i], row, arc_weight);
    defined &= c.defined;
    args[i] = c.value;
  }
  if (!defined) return {0.0, false};
  auto value = apply_operator(*x.op, std::span<const double>(args.data(), kids[v].size()));
  if (!value) return {0.0, false};
  // value - a0 - a1 - ... as hi + lo, exactly.
  double hi = *value;
  double lo = 0.0;
  for (std::size_t i = 0; i < kids[v].size(); ++i) {
    TwoSum s = two_sum(hi, -args[i]);
    hi = s.sum;
    lo += s.err;
  }
  TwoSum renorm = two_sum(hi, lo);
  arc_weight[v] = {renorm.sum, renorm.err};
  return {*value, true};
}

}  // namespace

std::vector<Violation> validate(const SymbolGraph& graph, const Arborescence& arb,
                                const TerminalSet& terminals) {
  check_arcs(graph, arb);
  std::vector<Violation> out;
  const std::size_t n = graph.num_vertices();
  std::vector<int> indeg(n, 0), outdeg(n, 0);
  std::vector<VertexId> parent(n, static_cast<VertexId>(-1));
  std::set<Arc> seen;
  for (const Arc& a : arb.arcs) {
    if (!seen.insert(a).second) {
      out.push_back({ViolationKind::DuplicateArc, a.from,
                     "arc " + graph.label(a.from) + "->" + graph.label(a.to) + " repeated"});
      continue;
    }
    ++indeg[a.to];
    ++outdeg[a.from];
    parent[a.to] = a.from;
  }
  std::vector<bool> in_tree(n, false);
  in_tree[arb.root] = true;
  for (const Arc& a : arb.arcs) in_tree[a.from] = in_tree[a.to] = true;

  if (indeg[arb.root] > 0) {
    out.push_back({ViolationKind::ArcIntoRoot, arb.root, "root has an incoming arc"});
  }
  for (VertexId v = 0; v < n; ++v) {
    if (v != arb.root && indeg[v] > 1) {
      out.push_back({ViolationKind::MultipleParents, v,
                     graph.label(v) + " has in-degree " + std::to_string(indeg[v])});
    }
  }
  // Every tree vertex must reach the root by following parents.
  for (VertexId v = 0; v < n; ++v) {
    if (!in_tree[v] || v == arb.root) continue;
    VertexId cur = v;
    std::size_t steps = 0;
    while (cur != arb.root && indeg[cur] > 0 && steps <= n) {
      cur = parent[cur];
      ++steps;
    }
    if (steps > n) {
      out.push_back({ViolationKind::Cycle, v, graph.label(v) + " lies on a cycle"});
    } else if (cur != arb.root) {
      out.push_back({ViolationKind::Unreachable, v,
                     graph.label(v) + " is not reachable from the root"});
    }
  }
  for (VertexId t : terminals.vertices) {
    if (t >= n) throw StructuralError("terminal is not a vertex of the graph");
    if (!in_tree[t]) {
      out.push_back({ViolationKind::MissingTerminal, t, "terminal " + graph.label(t) + " missing"});
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    if (!in_tree[v]) continue;
    const Vertex& x = graph.vertex(v);
    if (x.kind == VertexKind::Root) {
      if (outdeg[v] > graph.degree_bound(v)) {
        out.push_back({ViolationKind::RootDegreeExceeded, v,
                       "root out-degree " + std::to_string(outdeg[v]) + " exceeds " +
                           std::to_string(graph.degree_bound(v))});
      }
    } else if (outdeg[v] != graph.degree_bound(v)) {
      out.push_back({ViolationKind::DegreeMismatch, v,
                     graph.label(v) + " out-degree " + std::to_string(outdeg[v]) +
                         " != " + std::to_string(graph.degree_bound(v))});
    }
  }
  return out;
}

Expression to_expression(const SymbolGraph& graph, const Arborescence& arb) {
  require_valid(graph, arb);
  if (arb.arcs.empty()) throw StructuralError("an arborescence with no arcs has no expression");
  return canonical(build_expression(graph, children_of(graph, arb), arb.root));
}

Arborescence normalize(const SymbolGraph& graph, const Arborescence& arb) {
  require_valid(graph, arb);
  auto kids = children_of(graph, arb);
  for (VertexId v = 0; v < graph.num_vertices(); ++v) {
    if (graph.commutative(v)) std::sort(kids[v].begin(), kids[v].end());
  }
  Arborescence out{arb.root, {}};
  out.arcs.reserve(arb.arcs.size());
  struct Frame {
    VertexId v;
    std::size_t next;
  };
  std::vector<Frame> frames{{arb.root, 0}};
  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.next == kids[f.v].size()) {
      frames.pop_back();
      continue;
    }
    VertexId c = kids[f.v][f.next++];
    out.arcs.push_back({f.v, c});
    frames.push_back({c, 0});
  }
  return out;
}

EdgeWeightReport edge_weights(const SymbolGraph& graph, const Arborescence& arb,
                              std::span<const double> row) {
  require_valid(graph, arb);
  if (row.size() < static_cast<std::size_t>(graph.spec().num_variables)) {
    throw StructuralError("row has fewer columns than the graph has variables");
  }
  auto kids = children_of(graph, arb);
  std::vector<std::array<double, 2>> arc_weight(graph.num_vertices(), {0.0, 0.0});
  EdgeWeightReport report;
  for (VertexId c : kids[arb.root]) {
    if (!weigh(graph, kids, c, row, arc_weight).defined) report.defined = false;
  }
  CompensatedSum total;
  for (const Arc& a : arb.arcs) {
    const auto [hi, lo] = arc_weight[a.to];
    report.weights.push_back({a, hi, lo});
    total.add(hi);
    total.add(lo);
  }
  if (!report.defined) {
    for (auto& w : report.weights) w.hi = w.lo = std::nan("");
    report.total = std::nan("");
  } else {
    report.total = total.value();
  }
  return report;
}

std::string to_dot(const SymbolGraph& graph, const Arborescence& arb) {
  std::set<Arc> chosen(arb.arcs.begin(), arb.arcs.end());
  std::set<VertexId> used{arb.root};
  for (const Arc& a : arb.arcs) used.insert(a.to);
  std::ostringstream out;
  out << "digraph arborescence {\n";
  out << "  rankdir=TB;\n";
  for (VertexId v = 0; v < graph.num_vertices(); ++v) {
    out << "  v" << v << " [label=\"" << graph.label(v) << "\"";
    if (used.count(v)) out << ", color=darkgreen, penwidth=2";
    out << "];\n";
  }
  for (int layer = 0; layer <= graph.spec().levels + 1; ++layer) {
    out << "  { rank=same;";
    for (VertexId v = 0; v < graph.num_vertices(); ++v) {
      if (graph.vertex(v).level == layer) out << " v" << v << ";";
    }
    out << " }\n";
  }
  for (const Arc& a : graph.arcs()) {
    out << "  v" << a.from << " -> v" << a.to;
    if (chosen.count(a)) {
      out << " [color=darkgreen, penwidth=3]";
    } else {
      out << " [color=gray80]";
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_json(const EdgeWeightReport& report) {
  using nlohmann::json;
  json doc;
  doc["schema_version"] = 1;
  doc["defined"] = report.defined;
  json weights = json::array();
  for (const auto& w : report.weights) {
    json jw{{"from", w.arc.from}, {"to", w.arc.to}};
    if (report.defined) {
      jw["weight"] = w.hi;
      jw["residual"] = w.lo;
    } else {
      jw["weight"] = nullptr;
      jw["residual"] = nullptr;
    }
    weights.push_back(std::move(jw));
  }
  doc["weights"] = std::move(weights);
  if (report.defined) {
    doc["total"] = report.total;
  } else {
    doc["total"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

std::string to_json(const Arborescence& arb) {
  using nlohmann::json;
  json arcs = json::array();
  for (const Arc& a : arb.arcs) arcs.push_back({a.from, a.to});
  return json{{"root", arb.root}, {"arcs", std::move(arcs)}}.dump();
}

}  // namespace srgraph
