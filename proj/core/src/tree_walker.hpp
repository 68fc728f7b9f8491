#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "srgraph/steiner.hpp"
#include "srgraph/symbol_graph.hpp"

namespace srgraph::detail {

// Arc-by-arc depth-first construction of arborescences in a symbol graph.
//
// Open vertices sit on a stack; the top one receives the next child. Operator
// frames need exactly `arity` children, the root frame takes one or more.
// Children of commutative vertices are added in increasing id order so each
// child set is produced once; argument order of other operators is free.
class TreeWalker {
 public:
  TreeWalker(const SymbolGraph& g, const WalkOptions& options,
             std::atomic<std::uint64_t>* shared_expansions = nullptr)
      : g_(g),
        opt_(options),
        shared_(shared_expansions),
        used_(g.num_vertices(), false),
        next_copy_(g.num_symmetry_classes(), 0) {
    used_[g.root()] = true;
    arb_.root = g.root();
    frames_.push_back({g.root(), 0, 0, 0});
    pending_ = 1;
  }

  // Candidates for the root's first child, in walk order.
  std::vector<VertexId> first_choices() const {
    std::vector<VertexId> out;
    for (VertexId c : g_.out_neighbors(g_.root())) {
      if (allowed(0, c)) out.push_back(c);
    }
    return out;
  }

  template <class F>
  void run(F&& on_tree) {
    step(on_tree);
  }

  // Walks only the trees whose first root child is `first`.
  template <class F>
  void run_from(VertexId first, F&& on_tree) {
    try_child(0, first, on_tree);
  }

  const WalkStats& stats() const { return stats_; }
  const Arborescence& current() const { return arb_; }

 private:
  struct Frame {
    VertexId v;
    int remaining;  // operator frames: children still needed
    VertexId last_child;
    int children;
  };

  enum class Outcome { Skipped, Continue, Stop };

  bool allowed(std::size_t fi, VertexId c) const {
    const Frame& f = frames_[fi];
    if (used_[c]) return false;
    if (f.children > 0 && g_.commutative(f.v) && c <= f.last_child) return false;
    if (opt_.symmetry_breaking) {
      const int cls = g_.symmetry_class(c);
      if (cls >= 0 && next_copy_[cls] != g_.vertex(c).copy) return false;
    }
    return true;
  }

  template <class F>
  bool emit(F& on_tree) {
    if (arb_.arcs.size() < opt_.min_arcs || variables_ == 0) return false;
    for (VertexId t : opt_.required) {
      if (!used_[t]) return false;
    }
    ++stats_.trees;
    if (on_tree(static_cast<const Arborescence&>(arb_))) {
      stats_.stopped = true;
      return true;
    }
    return false;
  }

  template <class F>
  bool step(F& on_tree) {
    if (frames_.empty()) return emit(on_tree);
    const std::size_t fi = frames_.size() - 1;
    const Frame top = frames_[fi];
    const bool is_root = top.v == g_.root();
    if (!is_root && top.remaining == 0) {
      frames_.pop_back();
      const bool stop = step(on_tree);
      frames_.push_back(top);
      return stop;
    }
    if (is_root && top.children > 0) {
      frames_.pop_back();
      const bool stop = step(on_tree);
      frames_.push_back(top);
      if (stop) return true;
    }
    for (VertexId c : g_.out_neighbors(top.v)) {
      if (try_child(fi, c, on_tree) == Outcome::Stop) return true;
    }
    return false;
  }

  template <class F>
  Outcome try_child(std::size_t fi, VertexId c, F& on_tree) {
    if (!allowed(fi, c)) return Outcome::Skipped;
    const Frame saved = frames_[fi];
    const Vertex& vc = g_.vertex(c);
    const bool is_op = vc.kind == VertexKind::Operator;
    const bool is_root = saved.v == g_.root();
    const std::size_t slot_cost = is_root ? (saved.children == 0 ? 1 : 0) : 1;
    const std::size_t pending_after = pending_ - slot_cost + (is_op ? vc.op->arity : 0);
    if (arb_.arcs.size() + 1 + pending_after > opt_.max_arcs) {
      stats_.size_capped = true;
      return Outcome::Skipped;
    }
    ++stats_.expansions;
    const std::uint64_t spent =
        shared_ != nullptr ? shared_->fetch_add(1, std::memory_order_relaxed) + 1 : stats_.expansions;
    if (spent > opt_.budget) {
      --stats_.expansions;
      stats_.budget_exhausted = true;
      return Outcome::Stop;
    }

    const int cls = g_.symmetry_class(c);
    used_[c] = true;
    if (cls >= 0) ++next_copy_[cls];
    if (vc.kind == VertexKind::Variable) ++variables_;
    arb_.arcs.push_back({saved.v, c});
    Frame& f = frames_[fi];
    f.children += 1;
    f.last_child = c;
    if (!is_root) f.remaining -= 1;
    const std::size_t pending_before = pending_;
    pending_ = pending_after;
    if (is_op) frames_.push_back({c, vc.op->arity, 0, 0});

    const bool stop = step(on_tree);

    if (is_op) frames_.pop_back();
    pending_ = pending_before;
    frames_[fi] = saved;
    arb_.arcs.pop_back();
    if (vc.kind == VertexKind::Variable) --variables_;
    if (cls >= 0) --next_copy_[cls];
    used_[c] = false;
    return stop ? Outcome::Stop : Outcome::Continue;
  }

  const SymbolGraph& g_;
  const WalkOptions& opt_;
  std::atomic<std::uint64_t>* shared_;
  std::vector<bool> used_;
  std::vector<int> next_copy_;
  std::vector<Frame> frames_;
  Arborescence arb_;
  std::size_t pending_ = 0;
  int variables_ = 0;
  WalkStats stats_;
};

}  // namespace srgraph::detail
