// Text syntax for expressions.
//
//   top     := item ('+' item)*             each item is one TopSum child
//   item    := prod ('-' prod)*
//   expr    := prod (('+' | '-') prod)*      inside parentheses and call arguments
//   prod    := postfix (('*' | '/') postfix)*
//   postfix := primary ('^' '2')*
//   primary := number | '-' number | 'e' | 'pi' | 'x'N | name '(' expr (',' expr)* ')'
//            | '(' expr ')'
//
// A '+' at the top level separates sum terms, so "(x1 + x2)" is one Apply(+)
// term while "x1 + x2" is two terms.

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "srgraph/error.hpp"
#include "srgraph/expr.hpp"

namespace srgraph {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression parse_top() {
    std::vector<Expression> items;
    items.push_back(parse_item());
    while (accept('+')) items.push_back(parse_item());
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return Expression::top_sum(std::move(items));
  }

 private:
  Expression parse_item() {
    Expression lhs = parse_prod();
    while (accept('-')) lhs = binary("-", std::move(lhs), parse_prod());
    return lhs;
  }

  Expression parse_expr() {
    Expression lhs = parse_prod();
    for (;;) {
      if (accept('+')) {
        lhs = binary("+", std::move(lhs), parse_prod());
      } else if (accept('-')) {
        lhs = binary("-", std::move(lhs), parse_prod());
      } else {
        return lhs;
      }
    }
  }

  Expression parse_prod() {
    Expression lhs = parse_postfix();
    for (;;) {
      if (accept('*')) {
        lhs = binary("*", std::move(lhs), parse_postfix());
      } else if (accept('/')) {
        lhs = binary("/", std::move(lhs), parse_postfix());
      } else {
        return lhs;
      }
    }
  }

  Expression parse_postfix() {
    Expression base = parse_primary();
    while (accept('^')) {
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '2' ||
          (pos_ + 1 < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
                                       text_[pos_ + 1] == '.'))) {
        fail("only the exponent 2 is supported");
      }
      ++pos_;
      base = Expression::apply(*find_operator("square"), {std::move(base)});
    }
    return base;
  }

  Expression parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = parse_expr();
      expect(')');
      return inner;
    }
    if (c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view ident = text_.substr(start, pos_ - start);
      skip_ws();
      const bool call = pos_ < text_.size() && text_[pos_] == '(';
      if (!call) {
        if (ident == "pi") return Expression::constant(std::numbers::pi);
        if (ident == "e") return Expression::constant(std::numbers::e);
        if (ident.size() >= 2 && ident[0] == 'x') {
          std::size_t index = 0;
          auto [ptr, ec] = std::from_chars(ident.data() + 1, ident.data() + ident.size(), index);
          if (ec == std::errc() && ptr == ident.data() + ident.size() && index >= 1) {
            return Expression::variable(index - 1);
          }
        }
        fail_at("unknown identifier '" + std::string(ident) + "'", start);
      }
      const OperatorDef* op = find_operator(ident);
      if (op == nullptr || op->infix) {
        fail_at("unknown operator '" + std::string(ident) + "'", start);
      }
      ++pos_;  // '('
      std::vector<Expression> args;
      args.push_back(parse_expr());
      while (accept(',')) args.push_back(parse_expr());
      expect(')');
      if (args.size() != static_cast<std::size_t>(op->arity)) {
        fail_at(std::string(op->name) + " expects " + std::to_string(op->arity) + " arguments",
                start);
      }
      return Expression::apply(*op, std::move(args));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expression parse_number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    if (text_[end] == '-') ++end;
    while (end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.')) {
      ++end;
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp = end + 1;
      if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) ++exp;
      if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
        end = exp;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, value);
    if (ec != std::errc() || ptr != text_.data() + end) fail_at("malformed number", start);
    pos_ = end;
    return Expression::constant(value);
  }

  Expression binary(std::string_view symbol, Expression lhs, Expression rhs) {
    std::vector<Expression> args;
    args.push_back(std::move(lhs));
    args.push_back(std::move(rhs));
    return Expression::apply(*find_operator(symbol), std::move(args));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail("expected '" + std::string(1, c) + "' before end of input");
      fail("expected '" + std::string(1, c) + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) { throw ParseError(what, at); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_constant(double v) {
  if (v == std::numbers::pi) return "pi";
  if (v == std::numbers::e) return "e";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ptr);
  if (v < 0 || (v == 0.0 && std::signbit(v))) return "(" + s + ")";
  return s;
}

bool is_sum(const Expression& e) {
  return e.kind() == Expression::Kind::Apply && (e.op().name == "add" || e.op().name == "sub");
}

bool is_prod(const Expression& e) {
  return e.kind() == Expression::Kind::Apply && (e.op().name == "mul" || e.op().name == "div");
}

std::string render_expr(const Expression& e);
std::string render_prod(const Expression& e);

std::string render_primary(const Expression& e) {
  switch (e.kind()) {
    case Expression::Kind::Constant:
      return format_constant(e.value());
    case Expression::Kind::Variable:
      return "x" + std::to_string(e.index() + 1);
    case Expression::Kind::Apply:
      break;
    case Expression::Kind::TopSum:
      return "(" + render(e) + ")";
  }
  if (e.op().infix) return "(" + render_expr(e) + ")";
  std::string out(e.op().symbol);
  out += '(';
  for (std::size_t i = 0; i < e.children().size(); ++i) {
    if (i) out += ", ";
    out += render_expr(e.children()[i]);
  }
  out += ')';
  return out;
}

std::string render_postfix(const Expression& e) {
  if (e.kind() == Expression::Kind::Apply && e.op().name == "square") {
    return render_postfix(e.children()[0]) + "^2";
  }
  return render_primary(e);
}

std::string render_prod(const Expression& e) {
  if (is_prod(e)) {
    const auto& rhs = e.children()[1];
    std::string r = is_prod(rhs) ? "(" + render_expr(rhs) + ")" : render_postfix(rhs);
    return render_prod(e.children()[0]) + " " + std::string(e.op().symbol) + " " + r;
  }
  return render_postfix(e);
}

std::string render_expr(const Expression& e) {
  if (is_sum(e)) {
    const auto& rhs = e.children()[1];
    std::string r = is_sum(rhs) ? "(" + render_expr(rhs) + ")" : render_prod(rhs);
    return render_expr(e.children()[0]) + " " + std::string(e.op().symbol) + " " + r;
  }
  return render_prod(e);
}

// A top-level item may chain '-' but any '+' must be parenthesized.
std::string render_item(const Expression& e) {
  if (!is_sum(e)) return render_prod(e);
  if (e.op().name == "add") return "(" + render_expr(e) + ")";
  const auto& rhs = e.children()[1];
  std::string r = is_sum(rhs) ? "(" + render_expr(rhs) + ")" : render_prod(rhs);
  return render_item(e.children()[0]) + " - " + r;
}

}  // namespace

Expression parse(std::string_view text) { return Parser(text).parse_top(); }

std::string render(const Expression& expr) {
  if (expr.kind() != Expression::Kind::TopSum) return render_item(expr);
  std::string out;
  for (std::size_t i = 0; i < expr.children().size(); ++i) {
    if (i) out += " + ";
    out += render_item(expr.children()[i]);
  }
  return out;
}

}  // namespace srgraph
