#include "srgraph/expr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "srgraph/error.hpp"

namespace srgraph {
namespace {

bool always(std::span<const double>) { return true; }

const OperatorDef kAdd{"add", "+", 2, true, true,
                       [](std::span<const double> a) { return a[0] + a[1]; }, always};
const OperatorDef kSub{"sub", "-", 2, false, true,
                       [](std::span<const double> a) { return a[0] - a[1]; }, always};
const OperatorDef kMul{"mul", "*", 2, true, true,
                       [](std::span<const double> a) { return a[0] * a[1]; }, always};
const OperatorDef kDiv{"div", "/", 2, false, true,
                       [](std::span<const double> a) { return a[0] / a[1]; },
                       [](std::span<const double> a) { return a[1] != 0.0; }};
const OperatorDef kSin{"sin", "sin", 1, false, false,
                       [](std::span<const double> a) { return std::sin(a[0]); }, always};
const OperatorDef kCos{"cos", "cos", 1, false, false,
                       [](std::span<const double> a) { return std::cos(a[0]); }, always};
const OperatorDef kExp{"exp", "exp", 1, false, false,
                       [](std::span<const double> a) { return std::exp(a[0]); }, always};
const OperatorDef kLog{"log", "log", 1, false, false,
                       [](std::span<const double> a) { return std::log(a[0]); },
                       [](std::span<const double> a) { return a[0] > 0.0; }};
const OperatorDef kSqrt{"sqrt", "sqrt", 1, false, false,
                        [](std::span<const double> a) { return std::sqrt(a[0]); },
                        [](std::span<const double> a) { return a[0] >= 0.0; }};
const OperatorDef kSquare{"square", "^2", 1, false, false,
                          [](std::span<const double> a) { return a[0] * a[0]; }, always};
const OperatorDef kFma{"fma", "fma", 3, false, false,
                       [](std::span<const double> a) { return a[0] * a[1] + a[2]; }, always};

const std::array<const OperatorDef*, 11> kDefaults{&kAdd, &kSub,  &kMul, &kDiv,    &kSin, &kCos,
                                                   &kExp, &kLog, &kSqrt, &kSquare, &kFma};

int kind_rank(Expression::Kind k) {
  switch (k) {
    case Expression::Kind::Apply:
      return 0;
    case Expression::Kind::Variable:
      return 1;
    case Expression::Kind::Constant:
      return 2;
    case Expression::Kind::TopSum:
      return 3;
  }
  return 4;
}

std::optional<double> eval_node(const Expression& e, std::span<const double> row) {
  switch (e.kind()) {
    case Expression::Kind::Constant:
      return e.value();
    case Expression::Kind::Variable:
      return row[e.index()];
    case Expression::Kind::Apply: {
      std::array<double, 3> args{};
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        auto v = eval_node(e.children()[i], row);
        if (!v) return std::nullopt;
        args[i] = *v;
      }
      return apply_operator(e.op(), std::span<const double>(args.data(), e.children().size()));
    }
    case Expression::Kind::TopSum: {
      double sum = 0.0;
      for (const auto& c : e.children()) {
        auto v = eval_node(c, row);
        if (!v) return std::nullopt;
        sum += *v;
      }
      if (!std::isfinite(sum)) return std::nullopt;
      return sum;
    }
  }
  return std::nullopt;
}

}  // namespace

const OperatorDef* find_operator(std::string_view name) {
  for (const OperatorDef* op : kDefaults) {
    if (op->name == name || op->symbol == name) return op;
  }
  return nullptr;
}

std::span<const OperatorDef* const> default_operators() { return kDefaults; }

std::optional<double> apply_operator(const OperatorDef& op, std::span<const double> args) {
  if (!op.domain_ok(args)) return std::nullopt;
  const double v = op.apply(args);
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

Expression Expression::constant(double value) {
  if (!std::isfinite(value)) throw StructuralError("constant must be finite");
  Expression e;
  e.kind_ = Kind::Constant;
  e.value_ = value;
  return e;
}

Expression Expression::variable(std::size_t index) {
  Expression e;
  e.kind_ = Kind::Variable;
  e.index_ = index;
  return e;
}

Expression Expression::apply(const OperatorDef& op, std::vector<Expression> children) {
  if (children.size() != static_cast<std::size_t>(op.arity)) {
    throw StructuralError("operator " + std::string(op.name) + " expects " +
                          std::to_string(op.arity) + " arguments, got " +
                          std::to_string(children.size()));
  }
  for (const auto& c : children) {
    if (c.kind() == Kind::TopSum) throw StructuralError("TopSum may only appear at the root");
  }
  Expression e;
  e.kind_ = Kind::Apply;
  e.op_ = &op;
  e.children_ = std::move(children);
  return e;
}

Expression Expression::top_sum(std::vector<Expression> children) {
  if (children.empty()) throw StructuralError("TopSum needs at least one child");
  for (const auto& c : children) {
    if (c.kind() == Kind::TopSum) throw StructuralError("TopSum may only appear at the root");
  }
  Expression e;
  e.kind_ = Kind::TopSum;
  e.children_ = std::move(children);
  return e;
}

std::size_t Expression::arc_count() const {
  std::size_t n = 0;
  for (const auto& c : children_) n += 1 + c.arc_count();
  return n;
}

int Expression::operator_depth() const {
  int depth = 0;
  for (const auto& c : children_) depth = std::max(depth, c.operator_depth());
  return kind_ == Kind::Apply ? depth + 1 : depth;
}

std::size_t Expression::variable_bound() const {
  std::size_t bound = kind_ == Kind::Variable ? index_ + 1 : 0;
  for (const auto& c : children_) bound = std::max(bound, c.variable_bound());
  return bound;
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Expression::Kind::Constant:
      return a.value_ == b.value_;
    case Expression::Kind::Variable:
      return a.index_ == b.index_;
    case Expression::Kind::Apply:
      if (a.op_ != b.op_) return false;
      break;
    case Expression::Kind::TopSum:
      break;
  }
  return a.children_ == b.children_;
}

int compare(const Expression& a, const Expression& b) {
  const int ra = kind_rank(a.kind());
  const int rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case Expression::Kind::Constant:
      if (a.value() != b.value()) return a.value() < b.value() ? -1 : 1;
      return 0;
    case Expression::Kind::Variable:
      if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
      return 0;
    case Expression::Kind::Apply:
      if (a.op().name != b.op().name) return a.op().name < b.op().name ? -1 : 1;
      break;
    case Expression::Kind::TopSum:
      break;
  }
  const auto& ca = a.children();
  const auto& cb = b.children();
  for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) {
    if (int c = compare(ca[i], cb[i]); c != 0) return c;
  }
  if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
  return 0;
}

Expression canonical(const Expression& expr) {
  if (expr.kind() == Expression::Kind::Constant || expr.kind() == Expression::Kind::Variable) {
    return expr;
  }
  std::vector<Expression> children;
  children.reserve(expr.children().size());
  for (const auto& c : expr.children()) children.push_back(canonical(c));
  const bool commutative = expr.kind() == Expression::Kind::TopSum || expr.op().commutative;
  if (commutative) {
    std::stable_sort(children.begin(), children.end(),
                     [](const Expression& a, const Expression& b) { return compare(a, b) < 0; });
  }
  if (expr.kind() == Expression::Kind::TopSum) return Expression::top_sum(std::move(children));
  return Expression::apply(expr.op(), std::move(children));
}

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> x, std::vector<double> y,
                 std::vector<std::string> column_names)
    : rows_(rows),
      cols_(cols),
      x_(std::move(x)),
      y_(std::move(y)),
      column_names_(std::move(column_names)) {
  if (rows_ == 0) throw StructuralError("dataset needs at least one row");
  if (cols_ == 0) throw StructuralError("dataset needs at least one input column");
  if (x_.size() != rows_ * cols_) throw StructuralError("X has the wrong number of entries");
  if (y_.size() != rows_) throw StructuralError("row count of X does not match length of Y");
  if (!column_names_.empty() && column_names_.size() != cols_) {
    throw StructuralError("column_names must have one entry per input column");
  }
}

std::optional<double> evaluate(const Expression& expr, std::span<const double> row) {
  if (expr.variable_bound() > row.size()) {
    throw StructuralError("variable x" + std::to_string(expr.variable_bound()) +
                          " out of range for a row with " + std::to_string(row.size()) +
                          " columns");
  }
  return eval_node(expr, row);
}

std::vector<std::optional<double>> evaluate_dataset(const Expression& expr, const Dataset& data) {
  if (expr.variable_bound() > data.cols()) {
    throw StructuralError("variable x" + std::to_string(expr.variable_bound()) +
                          " out of range for a dataset with " + std::to_string(data.cols()) +
                          " columns");
  }
  std::vector<std::optional<double>> out;
  out.reserve(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) out.push_back(eval_node(expr, data.row(i)));
  return out;
}

double loss(std::span<const double> y, std::span<const std::optional<double>> predicted,
            LossKind kind) {
  if (y.size() != predicted.size()) {
    throw StructuralError("loss: target has " + std::to_string(y.size()) +
                          " entries but prediction has " + std::to_string(predicted.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!predicted[i]) return std::numeric_limits<double>::infinity();
    const double r = y[i] - *predicted[i];
    if (kind == LossKind::MaxAbs) {
      acc = std::max(acc, std::abs(r));
    } else {
      acc += r * r;
    }
  }
  if (kind == LossKind::MeanSquared && !y.empty()) acc /= static_cast<double>(y.size());
  return acc;
}

std::string_view to_string(LossKind kind) {
  return kind == LossKind::MaxAbs ? "max-abs" : "mse";
}

LossKind loss_kind_from_string(std::string_view name) {
  if (name == "max-abs" || name == "maxabs") return LossKind::MaxAbs;
  if (name == "mse" || name == "mean-squared") return LossKind::MeanSquared;
  throw StructuralError("unknown loss kind '" + std::string(name) + "'");
}

}  // namespace srgraph
