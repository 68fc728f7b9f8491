#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "srgraph/arborescence.hpp"
#include "srgraph/error.hpp"
#include "srgraph/io.hpp"
#include "srgraph/reductions.hpp"
#include "srgraph/steiner.hpp"
#include "srgraph/symbol_graph.hpp"
#include "srgraph/verify.hpp"

namespace srgraph::cli {
namespace {

using nlohmann::json;

struct Options {
  std::string spec_path;
  std::string data_path;
  std::string graph_path;
  std::string target;
  std::string dot_path;
  std::string json_path;
  std::string report_path;
  std::string out_path;
  std::string loss = "max-abs";
  std::string mode = "dcstp-to-dcsap";
  double epsilon = 0.0;
  double tol = 1e-6;
  std::uint64_t budget = 50'000'000;
  int threads = 1;
  bool at_most = false;
  long long root = -1;
  long long lo = 0;
  long long hi = -1;
  std::uint64_t seed = 42;
  std::vector<std::string> suites;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw StructuralError("cannot write '" + path + "'");
  f << content;
}

void maybe_write(const std::string& path, const std::string& content) {
  if (!path.empty()) write_file(path, content);
}

WeightedDigraph directed_instance(const std::string& path) {
  GraphInstance inst = read_instance_file(path);
  if (auto* d = std::get_if<WeightedDigraph>(&inst)) return *d;
  throw StructuralError("'" + path + "' holds an undirected instance; run 'reduce' first");
}

std::string arcs_text(const Arborescence& arb) {
  std::ostringstream s;
  for (std::size_t i = 0; i < arb.arcs.size(); ++i) {
    if (i) s << ' ';
    s << arb.arcs[i].from << "->" << arb.arcs[i].to;
  }
  return s.str();
}

int cmd_build(const Options& o, std::ostream& out) {
  const SymbolGraph g = SymbolGraph::build(read_spec_file(o.spec_path));
  maybe_write(o.dot_path, to_dot(g));
  maybe_write(o.json_path, to_json(g));
  if (o.dot_path.empty() && o.json_path.empty()) {
    out << to_dot(g);
  } else {
    out << "vertices " << g.num_vertices() << ", arcs " << g.arcs().size() << '\n';
  }
  return kOk;
}

int cmd_solve_sr(const Options& o, std::ostream& out) {
  const SymbolGraphSpec spec = read_spec_file(o.spec_path);
  const Dataset data = read_csv_file(o.data_path, o.target);
  const SymbolGraph g = SymbolGraph::build(spec);
  SrSearchOptions opt;
  opt.loss = loss_kind_from_string(o.loss);
  opt.epsilon = o.epsilon;
  opt.tol = o.tol;
  opt.budget = o.budget;
  opt.threads = o.threads;
  const SrResult r = solve_sr(g, data, opt);

  json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "sr";
  doc["loss_kind"] = std::string(to_string(opt.loss));
  doc["threshold"] = std::max(opt.epsilon, opt.tol);
  doc["found"] = r.expression.has_value();
  doc["complete"] = r.complete;
  if (r.expression) {
    doc["expression"] = render(*r.expression);
    doc["loss"] = r.loss;
    doc["arcs"] = json::parse(to_json(*r.arborescence))["arcs"];
  }
  if (r.best) {
    doc["best_expression"] = render(*r.best);
    doc["best_loss"] = r.best_loss;
  }
  doc["expansions"] = r.expansions;
  doc["trees"] = r.trees;
  maybe_write(o.report_path, doc.dump(2) + "\n");
  if (r.expression && !o.dot_path.empty()) write_file(o.dot_path, to_dot(g, *r.arborescence));

  if (r.expression) {
    out << "expression: " << render(*r.expression) << '\n';
    out << "loss: " << format_double(r.loss) << '\n';
  } else {
    out << "no expression within " << format_double(std::max(opt.epsilon, opt.tol)) << '\n';
    if (r.best) out << "best: " << render(*r.best) << " (loss " << format_double(r.best_loss) << ")\n";
    if (!r.complete) out << "search budget exhausted\n";
  }
  out << "expansions: " << r.expansions << '\n';
  return r.expression ? kOk : kNotFound;
}

int cmd_solve_graph(const Options& o, std::ostream& out) {
  const WeightedDigraph g = directed_instance(o.graph_path);
  const SolveResult r = solve_min_dcsap(g, o.budget);
  maybe_write(o.report_path, to_json(r, "min-dcsap"));
  out << "status: " << to_string(r.status) << '\n';
  if (r.arborescence) {
    out << "weight: " << format_double(r.weight) << '\n';
    out << "arcs: " << arcs_text(*r.arborescence) << '\n';
  }
  out << "nodes: " << r.stats.nodes << '\n';
  return r.status == SolveStatus::Found ? kOk : kNotFound;
}

int cmd_decide(const Options& o, std::ostream& out) {
  const WeightedDigraph g = directed_instance(o.graph_path);
  const DecideResult r =
      decide_dcsap(g, o.epsilon, o.tol, o.at_most ? DecideMode::AtMost : DecideMode::Exactly, o.budget);
  SolveResult as_solve{r.status, r.arborescence, r.weight, r.stats};
  maybe_write(o.report_path, to_json(as_solve, o.at_most ? "decide-at-most" : "decide-exactly"));
  out << (r.status == SolveStatus::Found ? "yes" : r.status == SolveStatus::Infeasible ? "no" : "unknown")
      << '\n';
  if (r.arborescence) {
    out << "weight: " << format_double(r.weight) << '\n';
    out << "arcs: " << arcs_text(*r.arborescence) << '\n';
  }
  return r.status == SolveStatus::Found ? kOk : kNotFound;
}

int cmd_reduce(const Options& o, std::ostream& out) {
  if (o.mode == "dcstp-to-dcsap") {
    GraphInstance inst = read_instance_file(o.graph_path);
    const auto* g = std::get_if<UndirectedGraph>(&inst);
    if (g == nullptr) throw StructuralError("'" + o.graph_path + "' is not an undirected instance");
    if (g->terminals.empty()) throw StructuralError("instance has no terminals to root at");
    const VertexId root = o.root >= 0 ? static_cast<VertexId>(o.root) : g->terminals.front();
    std::ostringstream s;
    write_instance(s, dcstp_to_dcsap(*g, root));
    if (o.out_path.empty()) {
      out << s.str();
    } else {
      write_file(o.out_path, s.str());
    }
    return kOk;
  }
  if (o.mode == "sr") {
    const Dataset data = read_csv_file(o.data_path, o.target);
    SRInstance inst{data, read_spec_file(o.spec_path), o.epsilon, o.tol, LossKind::MaxAbs};
    const SymbolDcsapInstance r = sr_to_dcsap(inst, 0);
    json doc;
    doc["schema_version"] = 1;
    doc["graph"] = json::parse(to_json(r.graph));
    doc["terminals"] = r.terminals.vertices;
    doc["target"] = r.target;
    doc["tol"] = r.tol;
    const std::string text = doc.dump(2) + "\n";
    if (o.out_path.empty()) {
      out << text;
    } else {
      write_file(o.out_path, text);
    }
    return kOk;
  }
  throw CLI::ValidationError("--mode", "must be dcstp-to-dcsap or sr");
}

int cmd_bisect(const Options& o, std::ostream& out) {
  const WeightedDigraph g = directed_instance(o.graph_path);
  const long long hi = o.hi >= 0 ? o.hi : static_cast<long long>(g.num_vertices);
  bool exhausted = false;
  auto oracle = [&](long long eps) {
    const DecideResult r = decide_dcsap(g, static_cast<double>(eps), 0.0, DecideMode::AtMost, o.budget);
    exhausted |= r.status == SolveStatus::BudgetExhausted;
    return r.status == SolveStatus::Found;
  };
  const BisectResult r = bisect_min_weight(oracle, o.lo, hi);
  if (r.minimum) {
    out << "minimum: " << *r.minimum << '\n';
  } else {
    out << "no arborescence with weight in [" << o.lo << ", " << hi << "]\n";
  }
  out << "oracle calls: " << r.calls << '\n';
  if (exhausted) out << "warning: an oracle call ran out of budget\n";
  return r.minimum ? kOk : kNotFound;
}

int cmd_count(const Options& o, std::ostream& out) {
  const SymbolGraphSpec spec = read_spec_file(o.spec_path);
  out << "arborescences: " << count_arborescences(spec, false) << '\n';
  try {
    const auto orbits = count_arborescences(spec, true);
    out << "expressions: " << orbits << '\n';
  } catch (const StructuralError& e) {
    out << "expressions: unavailable (" << e.what() << ")\n";
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  std::vector<std::string> names = o.suites;
  if (names.empty() || (names.size() == 1 && names[0] == "all")) {
    names.clear();
    for (auto s : verify::suite_names()) names.emplace_back(s);
  }
  for (const auto& n : names) {
    const auto known = verify::suite_names();
    if (std::find(known.begin(), known.end(), n) == known.end()) {
      throw CLI::ValidationError("suite", "unknown suite '" + n + "'");
    }
  }
  json summary;
  summary["schema_version"] = 1;
  summary["seed"] = o.seed;
  summary["suites"] = json::array();
  bool all = true;
  for (const auto& n : names) {
    const verify::SuiteReport r = verify::run_suite(n, o.seed);
    all &= r.passed();
    summary["suites"].push_back(json::parse(verify::to_json(r)));
  }
  summary["passed"] = all;
  const std::string text = summary.dump(2) + "\n";
  maybe_write(o.report_path, text);
  out << text;
  return all ? kOk : kNotFound;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Symbolic regression and Steiner arborescence toolkit", "srgraph"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build", "Build a symbol graph and export DOT/JSON");
  build->add_option("--spec", o.spec_path, "Spec config (JSON)")->required();
  build->add_option("--dot", o.dot_path, "Write the graph as DOT");
  build->add_option("--json", o.json_path, "Write the graph as JSON");

  auto* solve = app.add_subcommand("solve", "Search for an expression fitting a CSV dataset, or solve min-weight DCSAP on --graph");
  solve->add_option("--spec", o.spec_path, "Spec config (JSON)");
  solve->add_option("--data", o.data_path, "CSV dataset with header");
  solve->add_option("--graph", o.graph_path, "Directed instance file (min-weight mode)");
  solve->add_option("--target", o.target, "Target column name (default: last column)");
  solve->add_option("--epsilon", o.epsilon, "Loss threshold")->check(CLI::NonNegativeNumber);
  solve->add_option("--tol", o.tol, "Tolerance used when epsilon is smaller")->check(CLI::NonNegativeNumber);
  solve->add_option("--loss", o.loss, "max-abs or mse")->check(CLI::IsMember({"max-abs", "mse"}));
  solve->add_option("--budget", o.budget, "Node expansion budget");
  solve->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  solve->add_option("--report", o.report_path, "Write a JSON report");
  solve->add_option("--dot", o.dot_path, "Write the found tree as DOT");

  auto* decide = app.add_subcommand("decide", "Is there an arborescence of weight epsilon (or at most epsilon)?");
  decide->add_option("--graph", o.graph_path, "Directed instance file")->required();
  decide->add_option("--epsilon", o.epsilon, "Target weight")->required();
  decide->add_option("--tol", o.tol, "Tolerance")->check(CLI::NonNegativeNumber);
  decide->add_flag("--at-most", o.at_most, "Accept any weight <= epsilon + tol");
  decide->add_option("--budget", o.budget, "Node budget");
  decide->add_option("--report", o.report_path, "Write a JSON report");

  auto* reduce = app.add_subcommand("reduce", "Transform an instance (dcstp-to-dcsap or sr)");
  reduce->add_option("--mode", o.mode, "dcstp-to-dcsap or sr")->check(CLI::IsMember({"dcstp-to-dcsap", "sr"}));
  reduce->add_option("--graph", o.graph_path, "Undirected instance file");
  reduce->add_option("--root", o.root, "Root terminal (default: first terminal)");
  reduce->add_option("--spec", o.spec_path, "Spec config for sr mode");
  reduce->add_option("--data", o.data_path, "CSV dataset for sr mode");
  reduce->add_option("--target", o.target, "Target column name");
  reduce->add_option("--epsilon", o.epsilon, "Loss threshold")->check(CLI::NonNegativeNumber);
  reduce->add_option("--tol", o.tol, "Tolerance")->check(CLI::NonNegativeNumber);
  reduce->add_option("--out", o.out_path, "Output file (default: stdout)");

  auto* bisect = app.add_subcommand("bisect", "Minimum integer weight by bisection over the decision oracle");
  bisect->add_option("--graph", o.graph_path, "Directed instance file")->required();
  bisect->add_option("--lo", o.lo, "Lower end of the range");
  bisect->add_option("--hi", o.hi, "Upper end of the range (default: vertex count)");
  bisect->add_option("--budget", o.budget, "Node budget per oracle call");

  auto* count = app.add_subcommand("count", "Count arborescences and distinct expressions");
  count->add_option("--spec", o.spec_path, "Spec config (JSON)")->required();

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("suite", o.suites, "Suite names or 'all'");
  verify->add_option("--seed", o.seed, "Random seed");
  verify->add_option("--report", o.report_path, "Write the JSON summary");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (*build) return cmd_build(o, out);
    if (*solve) {
      if (!o.graph_path.empty()) return cmd_solve_graph(o, out);
      if (o.spec_path.empty() || o.data_path.empty()) {
        throw CLI::ValidationError("solve", "needs --spec and --data, or --graph");
      }
      return cmd_solve_sr(o, out);
    }
    if (*decide) return cmd_decide(o, out);
    if (*reduce) return cmd_reduce(o, out);
    if (*bisect) return cmd_bisect(o, out);
    if (*count) return cmd_count(o, out);
    if (*verify) return cmd_verify(o, out);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace srgraph::cli
