#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace stepverify::arith {

/// Exact rational value. Decimal literals are read exactly (0.20 is 1/5)
/// and nothing in the checker ever rounds.
using Rational = boost::multiprecision::cpp_rational;

enum class Sort { Nat, Real };

std::string to_string(Sort sort);

class EvalError : public std::runtime_error {
 public:
  EvalError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class UnboundVariable : public EvalError {
 public:
  explicit UnboundVariable(const std::string& name)
      : EvalError("unbound_variable", "variable '" + name + "' is not bound") {}
};

class DivisionByZero : public EvalError {
 public:
  DivisionByZero() : EvalError("division_by_zero", "division by zero") {}
};

class SortMismatch : public EvalError {
 public:
  explicit SortMismatch(const std::string& detail)
      : EvalError("sort_mismatch", "sort mismatch: " + detail) {}
};

/// Arithmetic expression over nonnegative decimal literals, variables and
/// + - * / div. Parentheses only group during parsing; the tree is
/// paren-free.
class ArithExpr {
 public:
  enum class Kind { Literal, Var, Add, Sub, Mul, Div, IntDiv };

  ArithExpr();  // the literal 0

  static ArithExpr literal(Rational value, std::string lexeme);
  static ArithExpr literal(long value);
  static ArithExpr var(std::string name);
  static ArithExpr binary(Kind op, ArithExpr lhs, ArithExpr rhs);

  Kind kind() const { return node_->kind; }
  const Rational& value() const { return node_->value; }
  const std::string& lexeme() const { return node_->text; }  // literal as written
  const std::string& name() const { return node_->text; }
  const ArithExpr& lhs() const { return node_->children[0]; }
  const ArithExpr& rhs() const { return node_->children[1]; }

  /// Structural equality; literals compare by value.
  bool operator==(const ArithExpr& other) const;
  bool operator!=(const ArithExpr& other) const { return !(*this == other); }

  void collect_vars(std::vector<std::string>& out) const;

 private:
  struct Node {
    Kind kind;
    Rational value;
    std::string text;  // lexeme for literals, name for variables
    std::vector<ArithExpr> children;
  };

  explicit ArithExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Binding {
  Sort sort = Sort::Nat;
  Rational value;
};

using Env = std::map<std::string, Binding>;

/// Evaluates under the given sort context. Nat: `-` is monus (truncated at
/// zero), `div` floor division, `/` rejected, literals must be integral.
/// Real: exact field arithmetic, `div` rejected. Variables must carry the
/// context sort.
Rational eval_expr(const ArithExpr& expr, const Env& env, Sort context);

/// Parses `0.20` style numerals into exact rationals.
Rational parse_decimal(const std::string& text);

std::string render_expr(const ArithExpr& expr);

}  // namespace stepverify::arith
