#include "stepverify/arith/expr.hpp"

#include <algorithm>

namespace stepverify::arith {

using Int = boost::multiprecision::cpp_int;

std::string to_string(Sort sort) { return sort == Sort::Nat ? "nat" : "real"; }

ArithExpr::ArithExpr() : node_(literal(0L).node_) {}

ArithExpr ArithExpr::literal(Rational value, std::string lexeme) {
  return ArithExpr(std::make_shared<Node>(
      Node{Kind::Literal, std::move(value), std::move(lexeme), {}}));
}

ArithExpr ArithExpr::literal(long value) {
  return literal(Rational(value), std::to_string(value));
}

ArithExpr ArithExpr::var(std::string name) {
  return ArithExpr(std::make_shared<Node>(Node{Kind::Var, Rational(), std::move(name), {}}));
}

ArithExpr ArithExpr::binary(Kind op, ArithExpr lhs, ArithExpr rhs) {
  return ArithExpr(std::make_shared<Node>(
      Node{op, Rational(), {}, {std::move(lhs), std::move(rhs)}}));
}

bool ArithExpr::operator==(const ArithExpr& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Literal:
      return node_->value == other.node_->value;
    case Kind::Var:
      return node_->text == other.node_->text;
    default:
      return node_->children[0] == other.node_->children[0] &&
             node_->children[1] == other.node_->children[1];
  }
}

void ArithExpr::collect_vars(std::vector<std::string>& out) const {
  switch (kind()) {
    case Kind::Literal:
      return;
    case Kind::Var:
      if (std::find(out.begin(), out.end(), name()) == out.end()) out.push_back(name());
      return;
    default:
      lhs().collect_vars(out);
      rhs().collect_vars(out);
  }
}

namespace {

bool is_integral(const Rational& r) { return denominator(r) == 1; }

}  // namespace

Rational eval_expr(const ArithExpr& expr, const Env& env, Sort context) {
  switch (expr.kind()) {
    case ArithExpr::Kind::Literal:
      if (context == Sort::Nat && !is_integral(expr.value())) {
        throw SortMismatch("literal '" + expr.lexeme() + "' in a nat equation");
      }
      return expr.value();
    case ArithExpr::Kind::Var: {
      auto it = env.find(expr.name());
      if (it == env.end()) throw UnboundVariable(expr.name());
      if (it->second.sort != context) {
        throw SortMismatch("variable '" + expr.name() + "' has sort " +
                           to_string(it->second.sort) + " in a " + to_string(context) +
                           " equation");
      }
      return it->second.value;
    }
    case ArithExpr::Kind::Add:
      return eval_expr(expr.lhs(), env, context) + eval_expr(expr.rhs(), env, context);
    case ArithExpr::Kind::Sub: {
      Rational a = eval_expr(expr.lhs(), env, context);
      Rational b = eval_expr(expr.rhs(), env, context);
      if (context == Sort::Nat) return a >= b ? Rational(a - b) : Rational(0);  // monus
      return a - b;
    }
    case ArithExpr::Kind::Mul:
      return eval_expr(expr.lhs(), env, context) * eval_expr(expr.rhs(), env, context);
    case ArithExpr::Kind::Div: {
      if (context == Sort::Nat) throw SortMismatch("real division '/' in a nat equation");
      Rational a = eval_expr(expr.lhs(), env, context);
      Rational b = eval_expr(expr.rhs(), env, context);
      if (b == 0) throw DivisionByZero();
      return a / b;
    }
    case ArithExpr::Kind::IntDiv: {
      if (context == Sort::Real) throw SortMismatch("'div' in a real equation");
      Rational a = eval_expr(expr.lhs(), env, context);
      Rational b = eval_expr(expr.rhs(), env, context);
      if (b == 0) throw DivisionByZero();
      if (!is_integral(a) || !is_integral(b)) throw SortMismatch("'div' on non-integers");
      return Rational(numerator(a) / numerator(b));  // operands nonnegative, so floor
    }
  }
  throw EvalError("internal", "unreachable expression kind");
}

Rational parse_decimal(const std::string& text) {
  Int num = 0;
  Int den = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("malformed numeral '" + text + "'");
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("malformed numeral '" + text + "'");
    num = num * 10 + (c - '0');
    if (seen_dot) den *= 10;
    seen_digit = true;
  }
  if (!seen_digit) throw std::invalid_argument("malformed numeral '" + text + "'");
  return Rational(num, den);
}

namespace {

int precedence(ArithExpr::Kind k) {
  switch (k) {
    case ArithExpr::Kind::Add:
    case ArithExpr::Kind::Sub: return 1;
    case ArithExpr::Kind::Mul:
    case ArithExpr::Kind::Div:
    case ArithExpr::Kind::IntDiv: return 2;
    default: return 3;
  }
}

const char* op_token(ArithExpr::Kind k) {
  switch (k) {
    case ArithExpr::Kind::Add: return " + ";
    case ArithExpr::Kind::Sub: return " - ";
    case ArithExpr::Kind::Mul: return " * ";
    case ArithExpr::Kind::Div: return " / ";
    case ArithExpr::Kind::IntDiv: return " div ";
    default: return "";
  }
}

void render(const ArithExpr& e, std::string& out) {
  switch (e.kind()) {
    case ArithExpr::Kind::Literal:
      out += e.lexeme();
      return;
    case ArithExpr::Kind::Var:
      out += e.name();
      return;
    default: {
      int p = precedence(e.kind());
      bool left_parens = precedence(e.lhs().kind()) < p;
      // All operators associate left, so equal strength on the right needs
      // parentheses to round-trip.
      bool right_parens = precedence(e.rhs().kind()) <= p;
      if (left_parens) out += '(';
      render(e.lhs(), out);
      if (left_parens) out += ')';
      out += op_token(e.kind());
      if (right_parens) out += '(';
      render(e.rhs(), out);
      if (right_parens) out += ')';
    }
  }
}

}  // namespace

std::string render_expr(const ArithExpr& expr) {
  std::string out;
  render(expr, out);
  return out;
}

}  // namespace stepverify::arith
