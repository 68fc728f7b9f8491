#include "srgraph/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "srgraph/arborescence.hpp"
#include "srgraph/error.hpp"

namespace srgraph::oracle {
namespace {

// ---------------------------------------------------------------------------
// Grammar enumeration. A subtree rooted at a level-t operator takes its
// arguments from level-(t+1) subtrees and leaves; usage counts how many
// vertices of each kind the subtree occupies.

struct Item {
  Expression expr;
  std::vector<int> use;
};

class Grammar {
 public:
  Grammar(const SymbolGraphSpec& spec, std::size_t max_items) : spec_(spec), max_items_(max_items) {
    const int ops = static_cast<int>(spec.operators.size());
    const int slots = spec.levels * ops + spec.num_variables + static_cast<int>(spec.constants.size());
    cap_.assign(slots, 1);
    for (int i = 0; i < spec.levels * ops; ++i) cap_[i] = spec.copies;
    for (int j = 0; j < spec.num_variables; ++j) cap_[spec.levels * ops + j] = spec.variable_copies;
    for (int j = 0; j < spec.num_variables; ++j) {
      std::vector<int> use(slots, 0);
      use[spec.levels * ops + j] = 1;
      leaves_.push_back({Expression::variable(static_cast<std::size_t>(j)), use});
    }
    for (std::size_t c = 0; c < spec.constants.size(); ++c) {
      std::vector<int> use(slots, 0);
      use[spec.levels * ops + spec.num_variables + static_cast<int>(c)] = 1;
      leaves_.push_back({Expression::constant(spec.constants[c]), use});
    }
    below_.resize(spec.levels + 2);
    below_[spec.levels + 1] = leaves_;
    for (int t = spec.levels; t >= 1; --t) {
      std::vector<Item> level_items;
      for (int o = 0; o < ops; ++o) build_ops(t, o, level_items);
      below_[t] = level_items;
      below_[t].insert(below_[t].end(), leaves_.begin(), leaves_.end());
    }
  }

  // Root: nonempty multisets of level-1 subtrees and leaves.
  std::vector<Item> roots() {
    std::vector<Item> out;
    std::vector<Expression> chosen;
    std::vector<int> use(cap_.size(), 0);
    choose_multiset(below_[1], 0, chosen, use, [&](const std::vector<Expression>& kids,
                                                   const std::vector<int>& u) {
      if (!uses_variable(u)) return;
      out.push_back({canonical(Expression::top_sum(kids)), u});
      if (out.size() > max_items_) truncated = true;
    });
    return out;
  }

  bool truncated = false;

 private:
  bool fits(const std::vector<int>& use) const {
    for (std::size_t i = 0; i < use.size(); ++i) {
      if (use[i] > cap_[i]) return false;
    }
    return true;
  }

  bool uses_variable(const std::vector<int>& use) const {
    const int base = spec_.levels * static_cast<int>(spec_.operators.size());
    for (int j = 0; j < spec_.num_variables; ++j) {
      if (use[base + j] > 0) return true;
    }
    return false;
  }

  static void add(std::vector<int>& a, const std::vector<int>& b, int sign) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += sign * b[i];
  }

  template <class F>
  void choose_multiset(const std::vector<Item>& pool, std::size_t from, std::vector<Expression>& chosen,
                       std::vector<int>& use, F&& sink) {
    if (!chosen.empty()) sink(chosen, use);
    if (truncated) return;
    for (std::size_t i = from; i < pool.size(); ++i) {
      add(use, pool[i].use, 1);
      if (fits(use)) {
        chosen.push_back(pool[i].expr);
        choose_multiset(pool, i, chosen, use, sink);
        chosen.pop_back();
      }
      add(use, pool[i].use, -1);
    }
  }

  void build_ops(int level, int o, std::vector<Item>& out) {
    const OperatorDef& op = *spec_.operators[o];
    const int slot = (level - 1) * static_cast<int>(spec_.operators.size()) + o;
    const std::vector<Item>& pool = below_[level + 1];
    std::vector<int> use(cap_.size(), 0);
    use[slot] = 1;
    std::vector<Expression> args;
    std::vector<std::size_t> idx;
    // Commutative operators take sorted index tuples, the rest take all tuples.
    auto rec = [&](auto&& self) -> void {
      if (truncated) return;
      if (static_cast<int>(args.size()) == op.arity) {
        out.push_back({canonical(Expression::apply(op, args)), use});
        if (out.size() > max_items_) truncated = true;
        return;
      }
      const std::size_t start = op.commutative && !idx.empty() ? idx.back() : 0;
      for (std::size_t i = start; i < pool.size(); ++i) {
        add(use, pool[i].use, 1);
        if (fits(use)) {
          args.push_back(pool[i].expr);
          idx.push_back(i);
          self(self);
          idx.pop_back();
          args.pop_back();
        }
        add(use, pool[i].use, -1);
      }
    };
    rec(rec);
  }

  const SymbolGraphSpec& spec_;
  std::size_t max_items_;
  std::vector<int> cap_;
  std::vector<Item> leaves_;
  std::vector<std::vector<Item>> below_;  // below_[t]: candidates for a level-(t-1) parent
};

// ---------------------------------------------------------------------------
// Parent-function enumeration over generic digraphs.

struct ParentChoice {
  std::vector<std::vector<int>> options;  // per vertex: arc indices into it; -1 = absent
};

template <class F>
void for_each_arborescence(const WeightedDigraph& g, F&& visit) {
  g.check();
  if (g.arcs.size() > kMaxBruteForceArcs) {
    throw StructuralError("brute force is capped at " + std::to_string(kMaxBruteForceArcs) +
                          " arcs, graph has " + std::to_string(g.arcs.size()));
  }
  const std::size_t n = g.num_vertices;
  std::vector<std::vector<int>> options(n, std::vector<int>{-1});
  for (std::size_t i = 0; i < g.arcs.size(); ++i) {
    if (g.arcs[i].to != g.root) options[g.arcs[i].to].push_back(static_cast<int>(i));
  }
  options[g.root] = {-1};
  std::vector<std::size_t> pick(n, 0);
  std::vector<int> deg(n);
  while (true) {
    // present = root or has a parent arc; the chain must end at the root.
    bool ok = true;
    std::fill(deg.begin(), deg.end(), 0);
    for (std::size_t v = 0; v < n && ok; ++v) {
      const int a = options[v][pick[v]];
      if (a < 0) continue;
      ++deg[g.arcs[a].from];
      ++deg[v];
      std::size_t cur = v;
      std::size_t steps = 0;
      while (cur != g.root && steps <= n) {
        const int pa = options[cur][pick[cur]];
        if (pa < 0) {
          ok = false;
          break;
        }
        cur = g.arcs[pa].from;
        ++steps;
      }
      if (cur != g.root) ok = false;
    }
    for (VertexId t : g.terminals) {
      if (t != g.root && options[t][pick[t]] < 0) ok = false;
    }
    for (std::size_t v = 0; v < n && ok; ++v) {
      if (deg[v] > g.bound(static_cast<VertexId>(v))) ok = false;
    }
    if (ok) {
      double w = 0.0;
      for (std::size_t v = 0; v < n; ++v) {
        if (options[v][pick[v]] >= 0) w += g.arcs[options[v][pick[v]]].weight;
      }
      visit(w);
    }
    std::size_t v = 0;
    while (v < n && ++pick[v] == options[v].size()) pick[v++] = 0;
    if (v == n) break;
  }
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

ExpressionStream enumerate_expressions(const SymbolGraphSpec& spec, const EnumerationBudget& budget) {
  spec.check();
  Grammar grammar(spec, budget.max_items);
  std::vector<Item> items = grammar.truncated ? std::vector<Item>{} : grammar.roots();
  ExpressionStream out;
  out.truncated = grammar.truncated;
  std::vector<std::pair<std::size_t, std::string>> keys;
  keys.reserve(items.size());
  for (const Item& it : items) keys.emplace_back(it.expr.arc_count(), render(it.expr));
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  for (std::size_t i : order) {
    if (out.expressions.size() == budget.max_items) {
      out.truncated = true;
      break;
    }
    out.expressions.push_back(items[i].expr);
  }
  return out;
}

SrBest brute_force_sr(const SRInstance& inst, const EnumerationBudget& budget) {
  if (inst.dataset.cols() != static_cast<std::size_t>(inst.spec.num_variables)) {
    throw StructuralError("dataset width does not match the spec's variables");
  }
  ExpressionStream stream = enumerate_expressions(inst.spec, budget);
  SrBest best;
  best.complete = !stream.truncated;
  std::size_t best_arcs = 0;
  std::string best_text;
  for (const Expression& e : stream.expressions) {
    const double l = loss(inst.dataset.y(), evaluate_dataset(e, inst.dataset), inst.loss);
    if (std::isinf(l)) continue;
    const std::size_t arcs = e.arc_count();
    if (best.expression) {
      if (l > best.loss) continue;
      if (l == best.loss) {
        if (arcs > best_arcs) continue;
        if (arcs == best_arcs && render(e) >= best_text) continue;
      }
    }
    best.expression = e;
    best.loss = l;
    best_arcs = arcs;
    best_text = render(e);
  }
  best.found = best.expression && best.loss <= std::max(inst.epsilon, inst.tol);
  return best;
}

std::optional<double> brute_force_dcsap(const WeightedDigraph& g) {
  std::optional<double> best;
  for_each_arborescence(g, [&](double w) {
    if (!best || w < *best) best = w;
  });
  return best;
}

std::vector<double> brute_force_dcsap_weights(const WeightedDigraph& g) {
  std::set<double> weights;
  for_each_arborescence(g, [&](double w) { weights.insert(w); });
  return {weights.begin(), weights.end()};
}

std::optional<double> brute_force_dcstp(const UndirectedGraph& g) {
  g.check();
  if (g.terminals.empty()) throw StructuralError("DCSTP needs at least one terminal");
  const std::size_t m = g.edges.size();
  if (m > kMaxBruteForceArcs) {
    throw StructuralError("brute force is capped at " + std::to_string(kMaxBruteForceArcs) + " edges");
  }
  std::optional<double> best;
  std::vector<int> deg(g.num_vertices);
  std::vector<bool> present(g.num_vertices);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::fill(deg.begin(), deg.end(), 0);
    std::fill(present.begin(), present.end(), false);
    for (VertexId t : g.terminals) present[t] = true;
    double w = 0.0;
    std::size_t edges = 0;
    DisjointSets ds(g.num_vertices);
    bool ok = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(mask >> i & 1u)) continue;
      const auto& e = g.edges[i];
      present[e.u] = present[e.v] = true;
      ++deg[e.u];
      ++deg[e.v];
      w += e.weight;
      ++edges;
      if (!ds.unite(e.u, e.v)) ok = false;  // cycle
    }
    if (!ok) continue;
    std::size_t vertices = 0;
    for (std::size_t v = 0; v < g.num_vertices; ++v) {
      if (!present[v]) continue;
      ++vertices;
      if (deg[v] > g.bound(static_cast<VertexId>(v))) ok = false;
    }
    // Acyclic with |E| = |V| - 1 means connected.
    if (!ok || edges + 1 != vertices) continue;
    if (!best || w < *best) best = w;
  }
  return best;
}

boost::multiprecision::cpp_int brute_force_count(const SymbolGraphSpec& spec, bool modulo_copy_symmetry,
                                                 const EnumerationBudget& budget) {
  const SymbolGraph g = SymbolGraph::build(spec);
  const std::size_t n = g.num_vertices();
  if (n > budget.max_vertices) {
    throw StructuralError("symbol graph has " + std::to_string(n) + " vertices, above the brute-force cap");
  }
  std::vector<std::vector<int>> parents(n, std::vector<int>{-1});
  for (const Arc& a : g.arcs()) parents[a.to].push_back(static_cast<int>(a.from));
  double space = 1.0;
  for (const auto& p : parents) space *= static_cast<double>(p.size());
  if (space > 5e7) throw StructuralError("parent-function space too large for brute force");

  boost::multiprecision::cpp_int raw = 0;
  std::set<std::string> seen;
  std::vector<std::size_t> pick(n, 0);
  std::vector<std::vector<VertexId>> kids(n);
  while (true) {
    for (auto& k : kids) k.clear();
    bool ok = true;
    bool has_variable = false;
    for (VertexId v = 1; v < n; ++v) {
      const int p = parents[v][pick[v]];
      if (p < 0) continue;
      if (p != 0 && parents[p][pick[p]] < 0) ok = false;  // parent not in the tree
      kids[p].push_back(v);
      has_variable |= g.vertex(v).kind == VertexKind::Variable;
    }
    if (ok && has_variable && !kids[0].empty() &&
        static_cast<int>(kids[0].size()) <= g.degree_bound(0)) {
      for (VertexId v = 1; v < n && ok; ++v) {
        const bool used = parents[v][pick[v]] >= 0;
        const int want = used ? g.degree_bound(v) : 0;
        if (static_cast<int>(kids[v].size()) != want) ok = false;
      }
      if (ok) {
        std::vector<VertexId> ordered_ops;
        boost::multiprecision::cpp_int orders = 1;
        for (VertexId v = 1; v < n; ++v) {
          if (kids[v].size() > 1 && !g.commutative(v)) {
            ordered_ops.push_back(v);
            for (std::size_t f = 2; f <= kids[v].size(); ++f) orders *= f;
          }
        }
        raw += orders;
        if (modulo_copy_symmetry) {
          // Every argument order of every non-commutative operator.
          auto rec = [&](auto&& self, std::size_t i) -> void {
            if (i == ordered_ops.size()) {
              Arborescence arb{0, {}};
              for (VertexId v = 0; v < n; ++v) {
                for (VertexId c : kids[v]) arb.arcs.push_back({v, c});
              }
              seen.insert(render(to_expression(g, arb)));
              return;
            }
            auto& list = kids[ordered_ops[i]];
            std::sort(list.begin(), list.end());
            do {
              self(self, i + 1);
            } while (std::next_permutation(list.begin(), list.end()));
          };
          rec(rec, 0);
        }
      }
    }
    std::size_t v = 1;
    while (v < n && ++pick[v] == parents[v].size()) pick[v++] = 0;
    if (v >= n) break;
  }
  if (modulo_copy_symmetry) return boost::multiprecision::cpp_int(seen.size());
  return raw;
}

}  // namespace srgraph::oracle
