#include "srgraph/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "json_util.hpp"
#include "srgraph/arborescence.hpp"
#include "srgraph/error.hpp"
#include "srgraph/oracle.hpp"

namespace srgraph::verify {
namespace {

constexpr std::size_t kMaxMessages = 10;
constexpr std::string_view kSuites[] = {"telescoping", "bijection",    "arc-doubling",
                                        "bisection",   "sr-reduction", "solver-oracle"};

const OperatorDef& op(std::string_view name) {
  const OperatorDef* def = find_operator(name);
  if (def == nullptr) throw StructuralError("unknown operator " + std::string(name));
  return *def;
}

SymbolGraphSpec make_spec(int levels, int copies, int variable_copies, int d,
                          std::vector<double> constants, std::vector<std::string_view> ops) {
  SymbolGraphSpec s;
  s.levels = levels;
  s.copies = copies;
  s.variable_copies = variable_copies;
  s.num_variables = d;
  s.constants = std::move(constants);
  for (auto name : ops) s.operators.push_back(&op(name));
  return s;
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string describe(const SymbolGraphSpec& s) { return detail::spec_to_json(s).dump(); }

// Telescoping: weight total equals the decoded expression's value.
void suite_telescoping(SuiteReport& r, Rng& rng) {
  std::vector<SymbolGraph> graphs;
  for (int levels = 1; levels <= 3; ++levels) {
    for (int d = 1; d <= 3; ++d) graphs.push_back(SymbolGraph::build(SymbolGraphSpec::with_defaults(levels, d)));
  }
  std::size_t attempts = 0;
  while (r.cases < 1200 && attempts < 50000) {
    ++attempts;
    const SymbolGraph& g = graphs[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(graphs.size()) - 1))];
    const Arborescence arb = random_arborescence(g, rng);
    const Expression e = to_expression(g, arb);
    std::vector<double> row(static_cast<std::size_t>(g.spec().num_variables));
    for (double& x : row) x = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    const auto value = evaluate(e, row);
    const EdgeWeightReport report = edge_weights(g, arb, row);
    if (!value) {
      if (report.defined) r.fail("edge weights defined where " + render(e) + " is not");
      continue;
    }
    ++r.cases;
    if (!report.defined) {
      r.fail("edge weights undefined for " + render(e));
      continue;
    }
    const double err = std::abs(report.total - *value);
    if (err > 1e-9 * std::max(1.0, std::abs(*value))) {
      r.fail(render(e) + ": total " + std::to_string(report.total) + " vs value " + std::to_string(*value));
    }
  }
}

// Bijection and counting on small specs.
void suite_bijection(SuiteReport& r, Rng&) {
  for (const SymbolGraphSpec& spec : spec_battery()) {
    const SymbolGraph g = SymbolGraph::build(spec);
    const auto raw = count_arborescences(spec, false);
    const auto sym = count_arborescences(spec, true);
    if (raw > 200) continue;
    ++r.cases;
    const oracle::ExpressionStream stream = oracle::enumerate_expressions(spec);
    if (stream.truncated) {
      r.fail("oracle truncated on " + describe(spec));
      continue;
    }
    if (sym != stream.expressions.size()) {
      r.fail("symmetric count " + sym.str() + " != oracle stream " +
             std::to_string(stream.expressions.size()) + " on " + describe(spec));
    }
    if (sym != oracle::brute_force_count(spec, true) || raw != oracle::brute_force_count(spec, false)) {
      r.fail("count differs from parent-function enumeration on " + describe(spec));
    }
    std::set<std::string> from_oracle;
    for (const Expression& e : stream.expressions) {
      from_oracle.insert(render(e));
      const EmbedResult emb = embed(g, e);
      if (!emb) {
        r.fail("oracle expression " + render(e) + " does not embed");
        continue;
      }
      if (!validate(g, *emb.arborescence, TerminalSet{{g.root()}}).empty()) {
        r.fail("embedding of " + render(e) + " is invalid");
        continue;
      }
      const Expression back = to_expression(g, *emb.arborescence);
      if (!(back == e)) r.fail("round trip changed " + render(e) + " into " + render(back));
      const EmbedResult again = embed(g, back);
      if (!again || !(*again.arborescence == *emb.arborescence)) {
        r.fail("embedding of " + render(e) + " is not stable");
      }
    }
    // Walker trees decode to exactly the oracle's expressions; without
    // symmetry breaking they number the raw count.
    for (bool breaking : {true, false}) {
      std::set<std::string> walked;
      WalkOptions opt;
      opt.symmetry_breaking = breaking;
      const WalkStats stats = enumerate_arborescences(g, opt, [&](const Arborescence& a) {
        walked.insert(render(to_expression(g, a)));
        return false;
      });
      if (walked != from_oracle) {
        r.fail(std::string("walker expression set differs (symmetry breaking ") +
               (breaking ? "on" : "off") + ") on " + describe(spec));
      }
      if (!breaking && raw != stats.trees) {
        r.fail("raw count " + raw.str() + " != walker trees " + std::to_string(stats.trees));
      }
    }
  }
}

// Arc doubling preserves the optimum for every terminal as root.
void suite_arc_doubling(SuiteReport& r, Rng& rng) {
  while (r.cases < 120) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 2, 5));
    const UndirectedGraph g = random_connected_graph(n, 5, rng);
    const auto undirected = oracle::brute_force_dcstp(g);
    for (VertexId root : g.terminals) {
      const auto directed = oracle::brute_force_dcsap(dcstp_to_dcsap(g, root));
      if (undirected != directed) {
        r.fail("n=" + std::to_string(n) + " root " + std::to_string(root) + ": DCSTP " +
               (undirected ? std::to_string(*undirected) : "none") + " vs DCSAP " +
               (directed ? std::to_string(*directed) : "none"));
      }
    }
    ++r.cases;
  }
}

// Bisection over a "weight <= eps" oracle finds the optimum within the call bound.
void suite_bisection(SuiteReport& r, Rng& rng) {
  while (r.cases < 60) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 2, 12));
    WeightedDigraph g = random_digraph(n, 3 * n, 1, rng);
    const SolveResult opt = solve_min_dcsap(g);
    auto oracle = [&](long long eps) {
      return decide_dcsap(g, static_cast<double>(eps), 0.0, DecideMode::AtMost).status ==
             SolveStatus::Found;
    };
    const BisectResult b = bisect_min_weight(oracle, 0, static_cast<long long>(n));
    const int bound = static_cast<int>(std::ceil(std::log2(static_cast<double>(n + 1)))) + 1;
    ++r.cases;
    const bool found = opt.status == SolveStatus::Found;
    if (found != b.minimum.has_value() ||
        (found && static_cast<double>(*b.minimum) != opt.weight)) {
      r.fail("n=" + std::to_string(n) + ": bisection " +
             (b.minimum ? std::to_string(*b.minimum) : "none") + " vs solver " +
             (found ? std::to_string(opt.weight) : "none"));
    }
    if (b.calls > bound) {
      r.fail("bisection used " + std::to_string(b.calls) + " calls, bound " + std::to_string(bound));
    }
  }
}

// Datasets for a spec: half realizable by an expression of the space, half not.
std::vector<Dataset> battery_datasets(const SymbolGraphSpec& spec, const std::vector<Expression>& space,
                                      Rng& rng, int count) {
  std::vector<Dataset> out;
  int guard = 0;
  while (static_cast<int>(out.size()) < count && guard++ < 20 * count) {
    const std::size_t rows = static_cast<std::size_t>(uniform_int(rng, 4, 8));
    Dataset inputs = random_inputs(rows, static_cast<std::size_t>(spec.num_variables), 0.5, 2.5, rng);
    if (out.size() % 2 == 0 && !space.empty()) {
      const auto& f = space[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(space.size()) - 1))];
      if (auto d = with_target(inputs, f)) out.push_back(std::move(*d));
    } else {
      std::vector<double> x(inputs.rows() * inputs.cols());
      for (std::size_t i = 0; i < inputs.rows(); ++i) {
        for (std::size_t j = 0; j < inputs.cols(); ++j) x[i * inputs.cols() + j] = inputs.x(i, j);
      }
      std::vector<double> y(rows);
      for (double& v : y) v = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
      out.emplace_back(rows, inputs.cols(), std::move(x), std::move(y));
    }
  }
  return out;
}

// SR-Dec by exhaustion agrees with DCSAP-Dec on the reduced instance.
void suite_sr_reduction(SuiteReport& r, Rng& rng) {
  for (const SymbolGraphSpec& spec : spec_battery()) {
    const auto stream = oracle::enumerate_expressions(spec);
    for (const Dataset& data : battery_datasets(spec, stream.expressions, rng, 20)) {
      SRInstance inst{data, spec, 0.0, 1e-6, LossKind::MaxAbs};
      const oracle::SrBest sr = oracle::brute_force_sr(inst);
      const ReducedDecision dec = sr_decide_via_dcsap(inst);
      ++r.cases;
      if (sr.found != dec.yes) {
        r.fail("SR-Dec " + std::string(sr.found ? "yes" : "no") + " vs DCSAP-Dec " +
               (dec.yes ? "yes" : "no") + " on " + describe(spec));
        continue;
      }
      if (dec.yes) {
        const double l = loss(data.y(), evaluate_dataset(*dec.expression, data), LossKind::MaxAbs);
        if (!(l <= inst.tol)) r.fail("decoded " + render(*dec.expression) + " has loss " + std::to_string(l));
      }
    }
  }
}

// Branch and bound against subset enumeration, and solve_sr against brute_force_sr.
void suite_solver_oracle(SuiteReport& r, Rng& rng) {
  for (int i = 0; i < 220; ++i) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 2, 6));
    const WeightedDigraph g = random_digraph(n, oracle::kMaxBruteForceArcs, 9, rng);
    const auto expected = oracle::brute_force_dcsap(g);
    const SolveResult got = solve_min_dcsap(g);
    ++r.cases;
    const bool found = got.status == SolveStatus::Found;
    if (found != expected.has_value() || (found && got.weight != *expected)) {
      r.fail("n=" + std::to_string(n) + ": solver " + (found ? std::to_string(got.weight) : "none") +
             " vs oracle " + (expected ? std::to_string(*expected) : "none"));
    }
    if (found && (!g.is_feasible(*got.arborescence) || g.weight_of(*got.arborescence) != got.weight)) {
      r.fail("solver returned an inconsistent arborescence");
    }
  }
  // Exact-weight decisions on unit weights against the set of achievable weights.
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 2, 6));
    const WeightedDigraph g = random_digraph(n, oracle::kMaxBruteForceArcs, 1, rng);
    const auto weights = oracle::brute_force_dcsap_weights(g);
    ++r.cases;
    for (std::size_t eps = 0; eps <= n; ++eps) {
      const bool expected = std::binary_search(weights.begin(), weights.end(), static_cast<double>(eps));
      const bool got = decide_dcsap(g, static_cast<double>(eps), 0.0).status == SolveStatus::Found;
      if (expected != got) r.fail("decide at eps=" + std::to_string(eps) + " disagrees with the oracle");
    }
  }
  for (const SymbolGraphSpec& spec : spec_battery()) {
    const SymbolGraph g = SymbolGraph::build(spec);
    const auto stream = oracle::enumerate_expressions(spec);
    for (const Dataset& data : battery_datasets(spec, stream.expressions, rng, 10)) {
      SRInstance inst{data, spec, 0.0, 1e-6, LossKind::MaxAbs};
      const oracle::SrBest expected = oracle::brute_force_sr(inst);
      const SrResult got = solve_sr(g, data, SrSearchOptions{});
      ++r.cases;
      if (expected.found != got.expression.has_value()) {
        r.fail("solve_sr " + std::string(got.expression ? "found" : "none") + " vs brute force " +
               (expected.found ? "found" : "none") + " on " + describe(spec));
      }
    }
  }
}

}  // namespace

void SuiteReport::fail(std::string message) {
  ++failures;
  if (messages.size() < kMaxMessages) messages.push_back(std::move(message));
}

std::span<const std::string_view> suite_names() { return kSuites; }

SuiteReport run_suite(std::string_view name, std::uint64_t seed) {
  SuiteReport r;
  r.suite = std::string(name);
  r.seed = seed;
  Rng rng(seed);
  const auto start = std::chrono::steady_clock::now();
  if (name == "telescoping") {
    suite_telescoping(r, rng);
  } else if (name == "bijection") {
    suite_bijection(r, rng);
  } else if (name == "arc-doubling") {
    suite_arc_doubling(r, rng);
  } else if (name == "bisection") {
    suite_bisection(r, rng);
  } else if (name == "sr-reduction") {
    suite_sr_reduction(r, rng);
  } else if (name == "solver-oracle") {
    suite_solver_oracle(r, rng);
  } else {
    throw StructuralError("unknown suite '" + std::string(name) + "'");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string to_json(const SuiteReport& report) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["suite"] = report.suite;
  doc["seed"] = report.seed;
  doc["cases"] = report.cases;
  doc["failures"] = report.failures;
  doc["passed"] = report.passed();
  doc["messages"] = report.messages;
  return doc.dump(2) + "\n";
}

std::vector<SymbolGraphSpec> spec_battery() {
  return {
      make_spec(1, 1, 1, 1, {}, {"sin"}),
      make_spec(1, 1, 2, 1, {}, {"sin"}),
      make_spec(1, 1, 2, 1, {1.0}, {"sin", "add"}),
      make_spec(1, 1, 1, 2, {}, {"mul", "sub"}),
      make_spec(1, 2, 2, 1, {}, {"exp", "log"}),
      make_spec(2, 1, 1, 1, {2.0}, {"sin", "square"}),
      make_spec(2, 1, 1, 2, {}, {"sin", "mul"}),
      make_spec(1, 1, 1, 1, {1.0, 2.0}, {"fma"}),
      make_spec(1, 1, 1, 2, {1.0}, {"div"}),
  };
}

Arborescence random_arborescence(const SymbolGraph& graph, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<bool> used(graph.num_vertices(), false);
    Arborescence arb{graph.root(), {}};
    bool ok = true;
    bool has_variable = false;
    auto pick = [&](VertexId parent, double op_bias) -> std::optional<VertexId> {
      std::vector<VertexId> ops, leaves;
      for (VertexId c : graph.out_neighbors(parent)) {
        if (used[c]) continue;
        (graph.vertex(c).kind == VertexKind::Operator ? ops : leaves).push_back(c);
      }
      auto& pool = !ops.empty() && (leaves.empty() || coin(rng, op_bias)) ? ops : leaves;
      if (pool.empty()) return std::nullopt;
      return pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(pool.size()) - 1))];
    };
    auto grow = [&](auto&& self, VertexId v, int depth) -> void {
      const int arity = graph.degree_bound(v);
      for (int i = 0; i < arity && ok; ++i) {
        auto c = pick(v, 0.6 / depth);
        if (!c) {
          ok = false;
          return;
        }
        used[*c] = true;
        arb.arcs.push_back({v, *c});
        has_variable |= graph.vertex(*c).kind == VertexKind::Variable;
        if (graph.vertex(*c).kind == VertexKind::Operator) self(self, *c, depth + 1);
      }
    };
    const int root_children = uniform_int(rng, 1, 3);
    for (int i = 0; i < root_children && ok; ++i) {
      auto c = pick(graph.root(), 0.6);
      if (!c) break;
      used[*c] = true;
      arb.arcs.push_back({graph.root(), *c});
      has_variable |= graph.vertex(*c).kind == VertexKind::Variable;
      if (graph.vertex(*c).kind == VertexKind::Operator) grow(grow, *c, 2);
    }
    if (ok && has_variable && !arb.arcs.empty()) return normalize(graph, arb);
  }
  throw StructuralError("could not sample an arborescence from this symbol graph");
}

Dataset random_inputs(std::size_t rows, std::size_t cols, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> x(rows * cols);
  for (double& v : x) v = dist(rng);
  return Dataset(rows, cols, std::move(x), std::vector<double>(rows, 0.0));
}

std::optional<Dataset> with_target(const Dataset& inputs, const Expression& f) {
  std::vector<double> x(inputs.rows() * inputs.cols());
  std::vector<double> y(inputs.rows());
  for (std::size_t i = 0; i < inputs.rows(); ++i) {
    for (std::size_t j = 0; j < inputs.cols(); ++j) x[i * inputs.cols() + j] = inputs.x(i, j);
    auto v = evaluate(f, inputs.row(i));
    if (!v) return std::nullopt;
    y[i] = *v;
  }
  return Dataset(inputs.rows(), inputs.cols(), std::move(x), std::move(y), inputs.column_names());
}

UndirectedGraph random_connected_graph(std::size_t n, int max_weight, Rng& rng) {
  UndirectedGraph g;
  g.num_vertices = n;
  std::set<std::pair<VertexId, VertexId>> have;
  auto add = [&](VertexId u, VertexId v) {
    if (u == v || !have.insert({std::min(u, v), std::max(u, v)}).second) return;
    g.edges.push_back({u, v, static_cast<double>(uniform_int(rng, 1, max_weight))});
  };
  for (VertexId v = 1; v < n; ++v) add(static_cast<VertexId>(uniform_int(rng, 0, static_cast<int>(v) - 1)), v);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (coin(rng, 0.4)) add(u, v);
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    if (coin(rng, 0.5)) g.terminals.push_back(v);
  }
  if (g.terminals.empty()) g.terminals.push_back(static_cast<VertexId>(uniform_int(rng, 0, static_cast<int>(n) - 1)));
  if (coin(rng, 0.5)) {
    g.degree_bound.assign(n, kUnbounded);
    for (int& b : g.degree_bound) {
      if (coin(rng, 0.4)) b = uniform_int(rng, 1, 3);
    }
  }
  return g;
}

WeightedDigraph random_digraph(std::size_t n, std::size_t max_arcs, int max_weight, Rng& rng) {
  WeightedDigraph g;
  g.num_vertices = n;
  g.root = 0;
  std::vector<std::pair<VertexId, VertexId>> candidates;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = 0; v < n; ++v) {
      if (u != v) candidates.push_back({u, v});
    }
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  const double density = std::uniform_real_distribution<double>(0.2, 0.7)(rng);
  for (const auto& [u, v] : candidates) {
    if (g.arcs.size() == max_arcs) break;
    if (coin(rng, density)) g.arcs.push_back({u, v, static_cast<double>(uniform_int(rng, 1, max_weight))});
  }
  std::sort(g.arcs.begin(), g.arcs.end(), [](const WeightedArc& a, const WeightedArc& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  g.terminals.push_back(0);
  for (VertexId v = 1; v < n; ++v) {
    if (coin(rng, 0.4)) g.terminals.push_back(v);
  }
  if (coin(rng, 0.5)) {
    g.degree_bound.assign(n, kUnbounded);
    for (int& b : g.degree_bound) {
      if (coin(rng, 0.4)) b = uniform_int(rng, 1, 3);
    }
  }
  return g;
}

}  // namespace srgraph::verify
