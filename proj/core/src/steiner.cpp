#include "srgraph/steiner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <set>

#include "json_util.hpp"
#include "srgraph/error.hpp"

namespace srgraph {

void WeightedDigraph::check() const {
  if (root >= num_vertices) throw StructuralError("root is not a vertex");
  for (VertexId t : terminals) {
    if (t >= num_vertices) throw StructuralError("terminal " + std::to_string(t) + " is not a vertex");
  }
  if (!degree_bound.empty() && degree_bound.size() != num_vertices) {
    throw StructuralError("degree_bound must have one entry per vertex");
  }
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const auto& a : arcs) {
    if (a.from >= num_vertices || a.to >= num_vertices) {
      throw StructuralError("arc endpoint is not a vertex");
    }
    if (a.from == a.to) throw StructuralError("self-loops are not allowed");
    if (!std::isfinite(a.weight)) throw StructuralError("arc weights must be finite");
    if (!seen.insert({a.from, a.to}).second) {
      throw StructuralError("parallel arc " + std::to_string(a.from) + "->" + std::to_string(a.to));
    }
  }
}

double WeightedDigraph::weight_of(const Arborescence& arb) const {
  double total = 0.0;
  for (const Arc& a : arb.arcs) {
    auto it = std::find_if(arcs.begin(), arcs.end(), [&](const WeightedArc& w) {
      return w.from == a.from && w.to == a.to;
    });
    if (it == arcs.end()) {
      throw StructuralError("arc " + std::to_string(a.from) + "->" + std::to_string(a.to) +
                            " is not in the graph");
    }
    total += it->weight;
  }
  return total;
}

bool WeightedDigraph::is_feasible(const Arborescence& arb) const {
  if (arb.root != root) return false;
  std::vector<int> indeg(num_vertices, 0), deg(num_vertices, 0);
  std::vector<VertexId> parent(num_vertices, 0);
  std::vector<bool> in_tree(num_vertices, false);
  in_tree[root] = true;
  for (const Arc& a : arb.arcs) {
    if (a.from >= num_vertices || a.to >= num_vertices) return false;
    bool exists = std::any_of(arcs.begin(), arcs.end(), [&](const WeightedArc& w) {
      return w.from == a.from && w.to == a.to;
    });
    if (!exists) return false;
    ++indeg[a.to];
    ++deg[a.from];
    ++deg[a.to];
    parent[a.to] = a.from;
    in_tree[a.from] = in_tree[a.to] = true;
  }
  if (indeg[root] != 0) return false;
  for (VertexId v = 0; v < num_vertices; ++v) {
    if (!in_tree[v]) continue;
    if (v != root && indeg[v] != 1) return false;
    if (deg[v] > bound(v)) return false;
    VertexId cur = v;
    std::size_t steps = 0;
    while (cur != root && steps <= num_vertices) {
      cur = parent[cur];
      ++steps;
    }
    if (cur != root) return false;
  }
  for (VertexId t : terminals) {
    if (!in_tree[t]) return false;
  }
  return true;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Enumerates rooted subtrees by branching on the first frontier arc: either it
// joins the tree or it is excluded for good. Every subtree is reached along
// exactly one branch.
class FrontierSearch {
 public:
  enum class Goal { Minimize, Exactly, AtMost };

  FrontierSearch(const WeightedDigraph& g, Goal goal, double epsilon, double tol,
                 std::uint64_t budget)
      : g_(g), goal_(goal), epsilon_(epsilon), tol_(tol), budget_(budget) {
    g.check();
    out_.resize(g.num_vertices);
    in_.resize(g.num_vertices);
    for (std::size_t i = 0; i < g.arcs.size(); ++i) {
      out_[g.arcs[i].from].push_back(static_cast<int>(i));
      in_[g.arcs[i].to].push_back(static_cast<int>(i));
      nonnegative_ &= g.arcs[i].weight >= 0.0;
    }
    in_tree_.assign(g.num_vertices, false);
    deg_.assign(g.num_vertices, 0);
    excluded_.assign(g.arcs.size(), false);
    is_terminal_.assign(g.num_vertices, false);
    for (VertexId t : g.terminals) is_terminal_[t] = true;
  }

  void run() {
    in_tree_[g_.root] = true;
    uncovered_ = 0;
    for (VertexId v = 0; v < g_.num_vertices; ++v) uncovered_ += is_terminal_[v] && !in_tree_[v];
    std::vector<int> frontier;
    for (int a : out_[g_.root]) frontier.push_back(a);
    search(frontier);
  }

  bool found() const { return best_.has_value(); }
  const std::optional<std::vector<int>>& best() const { return best_; }
  double best_weight() const { return best_weight_; }
  bool budget_exhausted() const { return exhausted_; }
  const SolveStats& stats() const { return stats_; }

  Arborescence to_arborescence(const std::vector<int>& chosen) const {
    Arborescence arb{g_.root, {}};
    for (int a : chosen) arb.arcs.push_back({g_.arcs[a].from, g_.arcs[a].to});
    return arb;
  }

 private:
  bool usable(int a) const {
    const auto& arc = g_.arcs[a];
    return !excluded_[a] && !in_tree_[arc.to] && deg_[arc.to] < g_.bound(arc.to) &&
           (!in_tree_[arc.from] || deg_[arc.from] < g_.bound(arc.from));
  }

  // Lower bound on the weight still to be added, or +inf if some uncovered
  // terminal can no longer be reached.
  double completion_lower_bound() const {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    if (!nonnegative_) {
      std::vector<bool> reached = in_tree_;
      std::vector<VertexId> queue;
      for (VertexId v = 0; v < g_.num_vertices; ++v) {
        if (in_tree_[v]) queue.push_back(v);
      }
      while (!queue.empty()) {
        VertexId u = queue.back();
        queue.pop_back();
        for (int a : out_[u]) {
          if (!usable(a) || reached[g_.arcs[a].to]) continue;
          reached[g_.arcs[a].to] = true;
          queue.push_back(g_.arcs[a].to);
        }
      }
      for (VertexId t : g_.terminals) {
        if (!reached[t]) return kInf;
      }
      double negative = 0.0;
      for (std::size_t a = 0; a < g_.arcs.size(); ++a) {
        if (usable(static_cast<int>(a))) negative += std::min(0.0, g_.arcs[a].weight);
      }
      return negative;
    }
    if (uncovered_ == 0) return 0.0;
    // Multi-source shortest paths from the tree into the rest of the graph.
    std::vector<double> dist(g_.num_vertices, kInf);
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (VertexId v = 0; v < g_.num_vertices; ++v) {
      if (in_tree_[v]) {
        dist[v] = 0.0;
        pq.push({0.0, v});
      }
    }
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (int a : out_[u]) {
        if (!usable(a)) continue;
        const auto& arc = g_.arcs[a];
        if (d + arc.weight < dist[arc.to]) {
          dist[arc.to] = d + arc.weight;
          pq.push({dist[arc.to], arc.to});
        }
      }
    }
    double farthest = 0.0;
    double entry_sum = 0.0;
    for (VertexId t : g_.terminals) {
      if (in_tree_[t]) continue;
      if (dist[t] == kInf) return kInf;
      farthest = std::max(farthest, dist[t]);
      double cheapest = kInf;
      for (int a : in_[t]) {
        if (!excluded_[a] && deg_[t] < g_.bound(t)) cheapest = std::min(cheapest, g_.arcs[a].weight);
      }
      entry_sum += cheapest;
    }
    return std::max(farthest, entry_sum);
  }

  // Largest weight the remaining vertices could still add (one parent each).
  double completion_upper_bound() const {
    double total = 0.0;
    for (VertexId v = 0; v < g_.num_vertices; ++v) {
      if (in_tree_[v]) continue;
      double best = 0.0;
      for (int a : in_[v]) {
        if (usable(a)) best = std::max(best, g_.arcs[a].weight);
      }
      total += best;
    }
    return total;
  }

  bool accepts(double w) const {
    switch (goal_) {
      case Goal::Minimize:
        return !best_ || w < best_weight_;
      case Goal::Exactly:
        return std::abs(w - epsilon_) <= tol_;
      case Goal::AtMost:
        return w <= epsilon_ + tol_;
    }
    return false;
  }

  bool done() const { return exhausted_ || (goal_ != Goal::Minimize && best_.has_value()); }

  void search(const std::vector<int>& frontier) {
    if (done()) return;
    if (stats_.nodes >= budget_) {
      exhausted_ = true;
      return;
    }
    ++stats_.nodes;
    const double lb = weight_ + completion_lower_bound();
    const bool prune_low = goal_ == Goal::Minimize ? (best_ && lb >= best_weight_)
                                                   : lb > epsilon_ + tol_;
    if (lb == std::numeric_limits<double>::infinity() || prune_low) {
      ++stats_.prunes;
      return;
    }
    if (goal_ == Goal::Exactly && weight_ + completion_upper_bound() < epsilon_ - tol_) {
      ++stats_.prunes;
      return;
    }
    if (uncovered_ == 0 && accepts(weight_)) {
      best_ = chosen_;
      best_weight_ = weight_;
      if (done()) return;
    }
    // With nonnegative weights a covering tree cannot get cheaper by growing.
    if (uncovered_ == 0 && nonnegative_ && goal_ != Goal::Exactly) return;

    std::size_t first = 0;
    while (first < frontier.size() && !usable(frontier[first])) ++first;
    if (first == frontier.size()) return;
    const int a = frontier[first];
    const auto& arc = g_.arcs[a];
    std::vector<int> rest(frontier.begin() + static_cast<std::ptrdiff_t>(first) + 1, frontier.end());

    // Include a.
    {
      in_tree_[arc.to] = true;
      ++deg_[arc.from];
      ++deg_[arc.to];
      weight_ += arc.weight;
      chosen_.push_back(a);
      if (is_terminal_[arc.to]) --uncovered_;
      std::vector<int> next;
      next.reserve(rest.size() + out_[arc.to].size());
      for (int b : rest) {
        if (g_.arcs[b].to != arc.to) next.push_back(b);
      }
      for (int b : out_[arc.to]) {
        if (!in_tree_[g_.arcs[b].to] && !excluded_[b]) next.push_back(b);
      }
      search(next);
      if (is_terminal_[arc.to]) ++uncovered_;
      chosen_.pop_back();
      weight_ -= arc.weight;
      --deg_[arc.to];
      --deg_[arc.from];
      in_tree_[arc.to] = false;
    }
    if (done()) return;
    // Exclude a.
    excluded_[a] = true;
    search(rest);
    excluded_[a] = false;
  }

  const WeightedDigraph& g_;
  Goal goal_;
  double epsilon_;
  double tol_;
  std::uint64_t budget_;
  bool nonnegative_ = true;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<bool> in_tree_;
  std::vector<int> deg_;
  std::vector<bool> excluded_;
  std::vector<bool> is_terminal_;
  std::vector<int> chosen_;
  double weight_ = 0.0;
  int uncovered_ = 0;
  std::optional<std::vector<int>> best_;
  double best_weight_ = 0.0;
  bool exhausted_ = false;
  SolveStats stats_;
};

}  // namespace

SolveResult solve_min_dcsap(const WeightedDigraph& g, std::uint64_t budget) {
  const auto start = Clock::now();
  FrontierSearch search(g, FrontierSearch::Goal::Minimize, 0.0, 0.0, budget);
  search.run();
  SolveResult result;
  result.stats = search.stats();
  if (search.found()) {
    result.arborescence = search.to_arborescence(*search.best());
    result.weight = g.weight_of(*result.arborescence);
  }
  if (search.budget_exhausted()) {
    result.status = SolveStatus::BudgetExhausted;
  } else {
    result.status = search.found() ? SolveStatus::Found : SolveStatus::Infeasible;
  }
  result.stats.wall_seconds = seconds_since(start);
  return result;
}

DecideResult decide_dcsap(const WeightedDigraph& g, double epsilon, double tol, DecideMode mode,
                          std::uint64_t budget) {
  if (tol < 0.0) throw StructuralError("tolerance must be nonnegative");
  const auto start = Clock::now();
  FrontierSearch search(g,
                        mode == DecideMode::Exactly ? FrontierSearch::Goal::Exactly
                                                    : FrontierSearch::Goal::AtMost,
                        epsilon, tol, budget);
  search.run();
  DecideResult result;
  result.stats = search.stats();
  if (search.found()) {
    result.status = SolveStatus::Found;
    result.arborescence = search.to_arborescence(*search.best());
    result.weight = g.weight_of(*result.arborescence);
  } else {
    result.status =
        search.budget_exhausted() ? SolveStatus::BudgetExhausted : SolveStatus::Infeasible;
  }
  result.stats.wall_seconds = seconds_since(start);
  return result;
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Found:
      return "found";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::BudgetExhausted:
      return "budget-exhausted";
  }
  return "unknown";
}

std::string to_json(const SolveResult& result, std::string_view kind) {
  using nlohmann::json;
  json doc;
  doc["schema_version"] = 1;
  doc["kind"] = std::string(kind);
  doc["status"] = std::string(to_string(result.status));
  if (result.arborescence) {
    json arcs = json::array();
    for (const Arc& a : result.arborescence->arcs) arcs.push_back({a.from, a.to});
    doc["arcs"] = std::move(arcs);
    doc["weight"] = result.weight;
  }
  // Timing stays out so that identical runs give identical reports.
  doc["stats"] = {{"nodes", result.stats.nodes}, {"prunes", result.stats.prunes}};
  return doc.dump(2) + "\n";
}

}  // namespace srgraph
