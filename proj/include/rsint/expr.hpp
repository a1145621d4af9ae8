#pragma once

// Minimal expression language for integrands f(x).
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | power
//   power  := atom ("^" factor)?
//   atom   := NUMBER | "x" | "sin" "(" expr ")" | "cos" "(" expr ")" | "(" expr ")"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <system_error>

#include "rsint/errors.hpp"

namespace rsint {

class Expr {
 public:
  enum class Kind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Sin, Cos };

  static Expr number(double v) {
    if (!std::isfinite(v)) throw SpecError("expression literals must be finite");
    return Expr(std::make_shared<const Node>(Node{Kind::Number, v, {}, {}}));
  }
  static Expr variable() {
    return Expr(std::make_shared<const Node>(Node{Kind::Variable, 0.0, {}, {}}));
  }
  static Expr unary(Kind k, Expr operand) {
    return Expr(std::make_shared<const Node>(Node{k, 0.0, std::move(operand.node_), {}}));
  }
  static Expr binary(Kind k, Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const Node>(
        Node{k, 0.0, std::move(lhs.node_), std::move(rhs.node_)}));
  }

  Kind kind() const noexcept { return node_->kind; }
  double value() const noexcept { return node_->value; }
  Expr lhs() const { return Expr(node_->lhs); }
  Expr rhs() const { return Expr(node_->rhs); }
  /// Operand of Negate / Sin / Cos.
  Expr operand() const { return Expr(node_->lhs); }

  bool depends_on_x() const {
    switch (kind()) {
      case Kind::Number: return false;
      case Kind::Variable: return true;
      case Kind::Negate:
      case Kind::Sin:
      case Kind::Cos: return operand().depends_on_x();
      default: return lhs().depends_on_x() || rhs().depends_on_x();
    }
  }

  friend bool operator==(const Expr& l, const Expr& r) {
    if (l.kind() != r.kind()) return false;
    switch (l.kind()) {
      case Kind::Number: return l.value() == r.value();
      case Kind::Variable: return true;
      case Kind::Negate:
      case Kind::Sin:
      case Kind::Cos: return l.operand() == r.operand();
      default: return l.lhs() == r.lhs() && l.rhs() == r.rhs();
    }
  }

 private:
  struct Node {
    Kind kind;
    double value;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

/// Evaluates at x; throws EvalError on division by zero, a negative base
/// with non-integer exponent, or a non-finite result.
inline double evaluate(const Expr& e, double x) {
  using K = Expr::Kind;
  double r = 0.0;
  switch (e.kind()) {
    case K::Number: return e.value();
    case K::Variable: return x;
    case K::Negate: return -evaluate(e.operand(), x);
    case K::Sin: r = std::sin(evaluate(e.operand(), x)); break;
    case K::Cos: r = std::cos(evaluate(e.operand(), x)); break;
    case K::Add: r = evaluate(e.lhs(), x) + evaluate(e.rhs(), x); break;
    case K::Subtract: r = evaluate(e.lhs(), x) - evaluate(e.rhs(), x); break;
    case K::Multiply: r = evaluate(e.lhs(), x) * evaluate(e.rhs(), x); break;
    case K::Divide: {
      const double den = evaluate(e.rhs(), x);
      if (den == 0.0) throw EvalError("division by zero", x);
      r = evaluate(e.lhs(), x) / den;
      break;
    }
    case K::Power: {
      const double base = evaluate(e.lhs(), x);
      const double expo = evaluate(e.rhs(), x);
      const bool integral = std::trunc(expo) == expo;
      if (base < 0.0 && !integral) {
        throw EvalError("negative base with non-integer exponent", x);
      }
      if (base == 0.0 && expo < 0.0) throw EvalError("division by zero in power", x);
      r = std::pow(base, expo);
      break;
    }
  }
  if (!std::isfinite(r)) throw EvalError("non-finite value", x);
  return r;
}

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  using K = Expr::Kind;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* context) {
    if (!accept(c)) fail(std::string("expected '") + c + "' " + context);
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(K::Add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::binary(K::Subtract, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(K::Multiply, lhs, factor());
      } else if (accept('/')) {
        lhs = Expr::binary(K::Divide, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    if (accept('-')) return Expr::unary(K::Negate, factor());
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) return Expr::binary(K::Power, base, factor());
    return base;
  }

  Expr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view id = text_.substr(start, pos_ - start);
      if (id == "x") return Expr::variable();
      if (id == "sin" || id == "cos") {
        expect('(', "after function name");
        Expr arg = expr();
        expect(')', "to close function call");
        return Expr::unary(id == "sin" ? K::Sin : K::Cos, arg);
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    if (accept('(')) {
      Expr inner = expr();
      expect(')', "to close parenthesis");
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t from = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ > from;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (!digits()) fail("malformed exponent");
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::number(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline int precedence(Expr::Kind k) {
  using K = Expr::Kind;
  switch (k) {
    case K::Add:
    case K::Subtract: return 1;
    case K::Multiply:
    case K::Divide: return 2;
    case K::Negate: return 3;
    case K::Power: return 4;
    default: return 5;
  }
}

inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

inline std::string to_string_prec(const Expr& e, int context);

}  // namespace detail

inline Expr parse(std::string_view text) { return detail::ExprParser(text).parse(); }

/// Prints with the minimal parentheses needed to re-parse to the same tree.
inline std::string to_string(const Expr& e) { return detail::to_string_prec(e, 0); }

namespace detail {

inline std::string to_string_prec(const Expr& e, int context) {
  using K = Expr::Kind;
  const int p = precedence(e.kind());
  std::string out;
  switch (e.kind()) {
    case K::Number: out = format_number(e.value()); break;
    case K::Variable: out = "x"; break;
    case K::Sin: out = "sin(" + to_string_prec(e.operand(), 0) + ")"; break;
    case K::Cos: out = "cos(" + to_string_prec(e.operand(), 0) + ")"; break;
    case K::Negate: out = "-" + to_string_prec(e.operand(), 3); break;
    case K::Power:
      out = to_string_prec(e.lhs(), 5) + "^" + to_string_prec(e.rhs(), 3);
      break;
    default: {
      const char* op = e.kind() == K::Add        ? "+"
                       : e.kind() == K::Subtract ? "-"
                       : e.kind() == K::Multiply ? "*"
                                                 : "/";
      out = to_string_prec(e.lhs(), p) + op + to_string_prec(e.rhs(), p + 1);
    }
  }
  return p < context ? "(" + out + ")" : out;
}

}  // namespace detail

}  // namespace rsint
