#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "srgraph/error.hpp"
#include "srgraph/steiner.hpp"
#include "tree_walker.hpp"

namespace srgraph {
namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Loss of the tree's output on every row, evaluated straight from the
// preorder arc list: walking it backwards, each operator finds its arguments
// on top of a value stack, first argument topmost.
class TreeScorer {
 public:
  TreeScorer(const SymbolGraph& g, const Dataset& data, LossKind kind)
      : g_(g), data_(data), kind_(kind) {}

  // Stops early once the loss provably exceeds `cutoff`.
  double loss(const Arborescence& arb, double cutoff) {
    double acc = 0.0;
    const auto& y = data_.y();
    const double n = static_cast<double>(data_.rows());
    for (std::size_t i = 0; i < data_.rows(); ++i) {
      auto value = output(arb, data_.row(i));
      if (!value) return kInf;
      const double r = y[i] - *value;
      if (kind_ == LossKind::MaxAbs) {
        acc = std::max(acc, std::abs(r));
        if (acc > cutoff) return acc;
      } else {
        acc += r * r;
        if (acc / n > cutoff) return kInf;
      }
    }
    return kind_ == LossKind::MaxAbs ? acc : acc / n;
  }

 private:
  std::optional<double> output(const Arborescence& arb, std::span<const double> row) {
    stack_.clear();
    for (auto it = arb.arcs.rbegin(); it != arb.arcs.rend(); ++it) {
      const Vertex& x = g_.vertex(it->to);
      switch (x.kind) {
        case VertexKind::Variable:
          stack_.push_back(row[x.variable]);
          break;
        case VertexKind::Constant:
          stack_.push_back(x.value);
          break;
        case VertexKind::Operator: {
          std::array<double, 3> args{};
          for (int k = 0; k < x.op->arity; ++k) {
            args[k] = stack_.back();
            stack_.pop_back();
          }
          auto v = apply_operator(*x.op, std::span<const double>(args.data(), x.op->arity));
          if (!v) return std::nullopt;
          stack_.push_back(*v);
          break;
        }
        case VertexKind::Root:
          break;
      }
    }
    double sum = 0.0;
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) sum += *it;
    if (!std::isfinite(sum)) return std::nullopt;
    return sum;
  }

  const SymbolGraph& g_;
  const Dataset& data_;
  LossKind kind_;
  std::vector<double> stack_;
};

struct Candidate {
  Arborescence arb;
  std::string text;
  double loss = kInf;
  std::size_t arcs = 0;
};

// Orders by loss, then fewer arcs, then rendering.
bool better(const Candidate& a, const Candidate& b) {
  if (a.loss != b.loss) return a.loss < b.loss;
  if (a.arcs != b.arcs) return a.arcs < b.arcs;
  return a.text < b.text;
}

struct LayerOutcome {
  std::optional<Candidate> accepted;  // smallest rendering among accepted trees
  std::optional<Candidate> incumbent;
  WalkStats stats;
};

void merge(LayerOutcome& into, LayerOutcome&& from) {
  if (from.accepted && (!into.accepted || from.accepted->text < into.accepted->text)) {
    into.accepted = std::move(from.accepted);
  }
  if (from.incumbent && (!into.incumbent || better(*from.incumbent, *into.incumbent))) {
    into.incumbent = std::move(from.incumbent);
  }
  into.stats.expansions += from.stats.expansions;
  into.stats.trees += from.stats.trees;
  into.stats.budget_exhausted |= from.stats.budget_exhausted;
  into.stats.size_capped |= from.stats.size_capped;
}

class LayerWorker {
 public:
  LayerWorker(const SymbolGraph& g, const Dataset& data, const SrSearchOptions& opt,
              double threshold, double incumbent_loss)
      : g_(g), scorer_(g, data, opt.loss), threshold_(threshold), incumbent_loss_(incumbent_loss) {}

  bool operator()(const Arborescence& arb) {
    const double cutoff = std::max(threshold_, incumbent_loss_);
    const double l = scorer_.loss(arb, cutoff);
    if (l <= threshold_) {
      std::string text = render(to_expression(g_, arb));
      if (!out.accepted || text < out.accepted->text) {
        out.accepted = Candidate{arb, text, l, arb.arcs.size()};
      }
    }
    if (l <= incumbent_loss_ && std::isfinite(l)) {
      Candidate c{arb, render(to_expression(g_, arb)), l, arb.arcs.size()};
      if (!out.incumbent || better(c, *out.incumbent)) {
        incumbent_loss_ = l;
        out.incumbent = std::move(c);
      }
    }
    return false;
  }

  LayerOutcome out;

 private:
  const SymbolGraph& g_;
  TreeScorer scorer_;
  double threshold_;
  double incumbent_loss_;
};

LayerOutcome run_layer(const SymbolGraph& g, const Dataset& data, const SrSearchOptions& opt,
                       double threshold, double incumbent_loss, std::size_t arcs,
                       std::uint64_t budget) {
  WalkOptions walk;
  walk.symmetry_breaking = opt.symmetry_breaking;
  walk.min_arcs = arcs;
  walk.max_arcs = arcs;
  walk.budget = budget;
  std::atomic<std::uint64_t> spent{0};

  detail::TreeWalker probe(g, walk);
  const auto firsts = probe.first_choices();
  const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(firsts.size())));

  std::vector<LayerOutcome> outcomes(firsts.size());
  auto work = [&](int worker) {
    for (std::size_t i = static_cast<std::size_t>(worker); i < firsts.size();
         i += static_cast<std::size_t>(threads)) {
      LayerWorker sink(g, data, opt, threshold, incumbent_loss);
      detail::TreeWalker walker(g, walk, &spent);
      walker.run_from(firsts[i], sink);
      sink.out.stats = walker.stats();
      outcomes[i] = std::move(sink.out);
      if (walker.stats().budget_exhausted) return;
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  LayerOutcome merged;
  for (auto& o : outcomes) merge(merged, std::move(o));
  return merged;
}

}  // namespace

WalkStats enumerate_arborescences(const SymbolGraph& graph, const WalkOptions& options,
                                  const std::function<bool(const Arborescence&)>& on_tree) {
  detail::TreeWalker walker(graph, options);
  walker.run(on_tree);
  return walker.stats();
}

SrResult solve_sr(const SymbolGraph& graph, const Dataset& data, const SrSearchOptions& options) {
  if (data.cols() != static_cast<std::size_t>(graph.spec().num_variables)) {
    throw StructuralError("dataset has " + std::to_string(data.cols()) +
                          " input columns but the symbol graph has " +
                          std::to_string(graph.spec().num_variables) + " variables");
  }
  if (options.tol < 0.0 || options.epsilon < 0.0) {
    throw StructuralError("epsilon and tol must be nonnegative");
  }
  const auto start = Clock::now();
  const double threshold = std::max(options.epsilon, options.tol);
  SrResult result;
  std::optional<Candidate> incumbent;
  const std::size_t max_arcs = graph.num_vertices() - 1;
  for (std::size_t arcs = 1; arcs <= max_arcs; ++arcs) {
    const std::uint64_t remaining =
        options.budget > result.expansions ? options.budget - result.expansions : 0;
    LayerOutcome layer = run_layer(graph, data, options, threshold,
                                   incumbent ? incumbent->loss : kInf, arcs, remaining);
    result.expansions += layer.stats.expansions;
    result.trees += layer.stats.trees;
    if (layer.incumbent && (!incumbent || better(*layer.incumbent, *incumbent))) {
      incumbent = std::move(layer.incumbent);
    }
    if (layer.accepted) {
      result.arborescence = layer.accepted->arb;
      result.expression = to_expression(graph, layer.accepted->arb);
      result.loss = layer.accepted->loss;
      break;
    }
    if (layer.stats.budget_exhausted) {
      result.complete = false;
      break;
    }
    if (!layer.stats.size_capped) break;
  }
  if (incumbent) {
    result.best = to_expression(graph, incumbent->arb);
    result.best_loss = incumbent->loss;
  }
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

SymbolDecideResult decide_symbol_dcsap(const SymbolGraph& graph, const TerminalSet& terminals,
                                       const Dataset& data, std::span<const double> target,
                                       double tol, std::uint64_t budget) {
  if (target.size() != data.rows()) {
    throw StructuralError("target length does not match the number of rows");
  }
  if (data.cols() != static_cast<std::size_t>(graph.spec().num_variables)) {
    throw StructuralError("dataset width does not match the symbol graph's variables");
  }
  SymbolDecideResult result;
  WalkOptions walk;
  walk.budget = budget;
  for (VertexId t : terminals.vertices) {
    if (t >= graph.num_vertices()) throw StructuralError("terminal is not a vertex");
    if (t != graph.root()) walk.required.push_back(t);
  }
  const std::size_t max_arcs = graph.num_vertices() - 1;
  for (std::size_t arcs = 1; arcs <= max_arcs; ++arcs) {
    walk.min_arcs = walk.max_arcs = arcs;
    walk.budget = budget > result.expansions ? budget - result.expansions : 0;
    auto stats = enumerate_arborescences(graph, walk, [&](const Arborescence& arb) {
      for (std::size_t i = 0; i < data.rows(); ++i) {
        EdgeWeightReport report = edge_weights(graph, arb, data.row(i));
        if (!report.defined || std::abs(report.total - target[i]) > tol) return false;
      }
      result.arborescence = arb;
      return true;
    });
    result.expansions += stats.expansions;
    if (result.arborescence) break;
    if (stats.budget_exhausted) {
      result.complete = false;
      break;
    }
    if (!stats.size_capped) break;
  }
  return result;
}

}  // namespace srgraph
