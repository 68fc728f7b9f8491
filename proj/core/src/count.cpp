// Counting arborescences of a symbol graph.
//
// Raw arborescences are counted level by level. Within a level only three
// numbers matter: how many operator copies are used, how many argument slots
// they open, and how many of them are commutative (whose two children are an
// unordered pair). Slots at level t are filled by the used level-(t+1)
// operators and some leaves, the root takes whatever is left.
//
// Orbits (modulo copy symmetry) need per-class usage, so they are counted with
// generating functions over resource-usage vectors: a polynomial maps usage
// vectors to counts and is truncated at the capacities. That is exponential in
// the number of classes and guarded by a term limit.

#include <map>
#include <tuple>

#include "srgraph/error.hpp"
#include "srgraph/symbol_graph.hpp"

namespace srgraph {
namespace {

using boost::multiprecision::cpp_int;
using Key = std::vector<std::uint8_t>;
using Poly = std::map<Key, cpp_int>;

constexpr std::size_t kMaxTerms = 50'000;
constexpr double kMaxWork = 5e6;  // term pairs visited across all products

cpp_int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  cpp_int r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

cpp_int factorial(int n) {
  cpp_int r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

cpp_int count_raw(const SymbolGraphSpec& spec) {
  const int p = spec.copies;
  const int max_n = p * static_cast<int>(spec.operators.size());
  const int max_slots = 3 * max_n;
  const int vars = spec.num_variables * spec.variable_copies;
  const int consts = static_cast<int>(spec.constants.size());
  const int leaves = vars + consts;

  // by_usage[n][slots][c]: ways to pick n copies of one level's operators
  // opening `slots` argument slots, c of them commutative.
  std::vector<std::vector<std::vector<cpp_int>>> by_usage(
      max_n + 1, std::vector<std::vector<cpp_int>>(max_slots + 1, std::vector<cpp_int>(max_n + 1)));
  by_usage[0][0][0] = 1;
  for (const OperatorDef* op : spec.operators) {
    auto next = by_usage;
    for (auto& a : next) {
      for (auto& b : a) std::fill(b.begin(), b.end(), cpp_int(0));
    }
    for (int n = 0; n <= max_n; ++n) {
      for (int s = 0; s <= max_slots; ++s) {
        for (int c = 0; c <= max_n; ++c) {
          if (by_usage[n][s][c] == 0) continue;
          for (int u = 0; u <= p && n + u <= max_n; ++u) {
            const int c2 = c + (op->commutative ? u : 0);
            next[n + u][s + u * op->arity][c2] += by_usage[n][s][c] * binomial(p, u);
          }
        }
      }
    }
    by_usage = std::move(next);
  }
  // level[n][slots]: also counts the ways to fill the slots with a given set
  // of children; swapping the two children of a commutative operator gives the
  // same arc set.
  std::vector<std::vector<cpp_int>> level(max_n + 1, std::vector<cpp_int>(max_slots + 1));
  for (int n = 0; n <= max_n; ++n) {
    for (int s = 0; s <= max_slots; ++s) {
      for (int c = 0; c <= max_n; ++c) {
        if (by_usage[n][s][c] == 0) continue;
        level[n][s] += by_usage[n][s][c] * factorial(s) / (cpp_int(1) << c);
      }
    }
  }

  // State after a level: (operators used there, their slots, leaves placed below the root).
  using State = std::tuple<int, int, int>;
  std::map<State, cpp_int> cur;
  for (int n = 0; n <= max_n; ++n) {
    for (int s = 0; s <= max_slots; ++s) {
      if (level[n][s] != 0) cur[{n, s, 0}] += level[n][s];
    }
  }
  for (int t = 2; t <= spec.levels; ++t) {
    std::map<State, cpp_int> next;
    for (const auto& [state, ways] : cur) {
      const auto [n, s, placed] = state;
      for (int n2 = 0; n2 <= std::min(s, max_n); ++n2) {
        const int a = s - n2;  // leaves in this level's slots
        if (placed + a > leaves) continue;
        const cpp_int fill = ways * binomial(placed + a, a);
        for (int s2 = 0; s2 <= max_slots; ++s2) {
          if (level[n2][s2] != 0) next[{n2, s2, placed + a}] += fill * level[n2][s2];
        }
      }
    }
    cur = std::move(next);
  }
  cpp_int total = 0;
  for (const auto& [state, ways] : cur) {
    const auto [n, s, placed] = state;
    const int below = placed + s;  // the last level takes only leaves
    if (below > leaves) continue;
    const cpp_int fill = ways * binomial(below, s);
    for (int at_root = 0; below + at_root <= leaves; ++at_root) {
      const int used = below + at_root;
      if (used == 0) continue;
      // Which leaf vertices are used; at least one must be a variable.
      const cpp_int chosen = binomial(leaves, used) - binomial(consts, used);
      total += fill * binomial(used, at_root) * chosen;
    }
  }
  return total;
}

// Orbits under permutations of interchangeable copies, i.e. distinct
// canonical expressions.
class OrbitCounter {
 public:
  explicit OrbitCounter(const SymbolGraphSpec& spec) : spec_(spec) {
    const int d = spec.num_variables;
    const int nc = static_cast<int>(spec.constants.size());
    const int no = static_cast<int>(spec.operators.size());
    caps_.assign(d, static_cast<std::uint8_t>(spec.variable_copies));
    caps_.insert(caps_.end(), nc, 1);
    caps_.insert(caps_.end(), static_cast<std::size_t>(spec.levels * no),
                 static_cast<std::uint8_t>(spec.copies));
    const_offset_ = d;
    op_offset_ = d + nc;
  }

  cpp_int count() {
    Poly leaves;
    for (int j = 0; j < spec_.num_variables; ++j) leaves[unit(j)] += 1;
    for (std::size_t c = 0; c < spec_.constants.size(); ++c) {
      leaves[unit(const_offset_ + static_cast<int>(c))] += 1;
    }

    Poly children = leaves;
    for (int t = spec_.levels; t >= 1; --t) {
      Poly level;
      for (std::size_t i = 0; i < spec_.operators.size(); ++i) {
        const OperatorDef& op = *spec_.operators[i];
        Poly atom;
        atom[unit(op_dim(t, static_cast<int>(i)))] = 1;
        for (auto& [k, v] : multiply(atom, arguments(op, children))) level[k] += v;
      }
      children = std::move(level);
      for (const auto& [k, v] : leaves) children[k] += v;
      guard(children);
    }

    cpp_int total = 0;
    for (const auto& [key, v] : multisets(children)) {
      bool has_variable = false;
      for (int j = 0; j < spec_.num_variables; ++j) has_variable |= key[j] > 0;
      if (has_variable) total += v;
    }
    return total;
  }

 private:
  Key unit(int dim) const {
    Key k(caps_.size(), 0);
    k[dim] = 1;
    return k;
  }

  int op_dim(int level, int op_index) const {
    return op_offset_ + (level - 1) * static_cast<int>(spec_.operators.size()) + op_index;
  }

  static void guard(const Poly& p) {
    if (p.size() > kMaxTerms) {
      throw StructuralError("spec too large to count modulo copy symmetry");
    }
  }

  bool sum_fits(const Key& a, const Key& b, Key& out) const {
    for (std::size_t c = 0; c < caps_.size(); ++c) {
      const int s = a[c] + b[c];
      if (s > caps_[c]) return false;
      out[c] = static_cast<std::uint8_t>(s);
    }
    return true;
  }

  static cpp_int multichoose(const cpp_int& n, int r) {
    // C(n + r - 1, r)
    cpp_int num = 1;
    cpp_int den = 1;
    for (int i = 0; i < r; ++i) {
      num *= n + i;
      den *= i + 1;
    }
    return num / den;
  }

  Poly multiply(const Poly& a, const Poly& b) const {
    work_ += static_cast<double>(a.size()) * static_cast<double>(b.size());
    if (work_ > kMaxWork) throw StructuralError("spec too large to count modulo copy symmetry");
    Poly out;
    Key k(caps_.size());
    for (const auto& [ka, va] : a) {
      for (const auto& [kb, vb] : b) {
        if (sum_fits(ka, kb, k)) out[k] += va * vb;
      }
    }
    guard(out);
    return out;
  }

  Poly arguments(const OperatorDef& op, const Poly& children) const {
    if (!op.commutative) {
      Poly out = children;
      for (int i = 1; i < op.arity; ++i) out = multiply(out, children);
      return out;
    }
    if (op.arity != 2) {
      throw StructuralError("counting supports commutative operators of arity 2 only");
    }
    // Unordered pairs: (C(x)^2 + C(x^2)) / 2.
    Poly sq = multiply(children, children);
    for (const auto& [k, v] : children) {
      Key doubled(k.size());
      if (sum_fits(k, k, doubled)) sq[doubled] += v;
    }
    for (auto& [k, v] : sq) v /= 2;
    return sq;
  }

  // Nonempty multisets.
  Poly multisets(const Poly& items) const {
    Poly acc;
    acc[Key(caps_.size(), 0)] = 1;
    for (const auto& [k, f] : items) {
      Poly factor;
      Key power(caps_.size(), 0);
      factor[power] = 1;
      for (int r = 1;; ++r) {
        Key next(caps_.size());
        if (!sum_fits(power, k, next)) break;
        power = next;
        factor[power] = multichoose(f, r);
      }
      acc = multiply(acc, factor);
    }
    acc.erase(Key(caps_.size(), 0));
    return acc;
  }

  const SymbolGraphSpec& spec_;
  Key caps_;
  int const_offset_ = 0;
  int op_offset_ = 0;
  mutable double work_ = 0.0;
};

}  // namespace

boost::multiprecision::cpp_int count_arborescences(const SymbolGraphSpec& spec,
                                                   bool modulo_copy_symmetry) {
  spec.check();
  if (!modulo_copy_symmetry) return count_raw(spec);
  for (int cap : {spec.copies, spec.variable_copies}) {
    if (cap > 255) throw StructuralError("copy counts above 255 are not supported by counting");
  }
  return OrbitCounter(spec).count();
}

}  // namespace srgraph
