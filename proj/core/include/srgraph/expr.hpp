#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace srgraph {

/// A mathematical function usable as an operator vertex.
///
/// `apply` is the raw formula; `domain_ok` flags inputs outside the domain
/// (log of a nonpositive number, division by zero). Definitions live in a
/// static registry, so identity of the pointer is identity of the operator.
struct OperatorDef {
  std::string_view name;    // canonical name used in configs and JSON ("add", "sin")
  std::string_view symbol;  // infix symbol or function name used in text ("+", "sin")
  int arity;
  bool commutative;
  bool infix;
  double (*apply)(std::span<const double> args);
  bool (*domain_ok)(std::span<const double> args);
};

/// Looks an operator up by canonical name or by symbol ("add", "+", "mul", "*", "^2").
/// Returns nullptr when nothing matches.
const OperatorDef* find_operator(std::string_view name);

/// +, -, *, / (binary), sin, cos, exp, log, sqrt, square (unary), fma (ternary, a*b+c).
std::span<const OperatorDef* const> default_operators();

/// Applies the operator, returning nullopt when the domain guard fires or the
/// result is not finite.
std::optional<double> apply_operator(const OperatorDef& op, std::span<const double> args);

/// Expression tree. The root of a complete expression is a TopSum node (the
/// cumulative-sum vertex); TopSum never appears below the root.
class Expression {
 public:
  enum class Kind { Constant, Variable, Apply, TopSum };

  static Expression constant(double value);
  static Expression variable(std::size_t index);
  static Expression apply(const OperatorDef& op, std::vector<Expression> children);
  static Expression top_sum(std::vector<Expression> children);

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  std::size_t index() const { return index_; }
  const OperatorDef& op() const { return *op_; }
  const std::vector<Expression>& children() const { return children_; }

  /// Number of nodes below the root, i.e. the arc count of the matching
  /// arborescence when this is a TopSum.
  std::size_t arc_count() const;
  /// Depth counted in operator levels: a leaf is 0, sin(x1) is 1.
  int operator_depth() const;
  /// One past the largest variable index used, 0 when there are no variables.
  std::size_t variable_bound() const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  Expression() = default;

  Kind kind_ = Kind::Constant;
  double value_ = 0.0;
  std::size_t index_ = 0;
  const OperatorDef* op_ = nullptr;
  std::vector<Expression> children_;
};

/// Total structural order used to canonicalize commutative children:
/// Apply < Variable < Constant, then by operator name / index / value, then
/// children lexicographically.
int compare(const Expression& a, const Expression& b);

/// Sorts the children of every commutative node (TopSum, +, *) by `compare`.
Expression canonical(const Expression& expr);

class Dataset {
 public:
  Dataset(std::size_t rows, std::size_t cols, std::vector<double> x, std::vector<double> y,
          std::vector<std::string> column_names = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t i) const { return {x_.data() + i * cols_, cols_}; }
  double x(std::size_t i, std::size_t j) const { return x_[i * cols_ + j]; }
  const std::vector<double>& y() const { return y_; }
  const std::vector<std::string>& column_names() const { return column_names_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<std::string> column_names_;
};

enum class LossKind { MaxAbs, MeanSquared };

std::optional<double> evaluate(const Expression& expr, std::span<const double> row);
std::vector<std::optional<double>> evaluate_dataset(const Expression& expr, const Dataset& data);

/// +inf as soon as any prediction is undefined.
double loss(std::span<const double> y, std::span<const std::optional<double>> predicted, LossKind kind);

Expression parse(std::string_view text);
std::string render(const Expression& expr);

std::string_view to_string(LossKind kind);
LossKind loss_kind_from_string(std::string_view name);

}  // namespace srgraph
