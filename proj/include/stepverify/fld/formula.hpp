#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace stepverify::fld {

// A term is either a named constant ({a}, {b}, {ab}) or a quantified
// variable. Variables only occur under a binding quantifier.
struct Term {
  enum class Kind { Constant, Variable };

  Kind kind;
  std::string name;

  static Term constant(std::string name) { return {Kind::Constant, std::move(name)}; }
  static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }

  bool operator==(const Term&) const = default;
};

/// Immutable formula AST for the braced symbolic logic language:
/// atoms {A} / {A}{a} / {A}x, connectives ¬ & v ->, and the quantifier
/// prefixes (x): and (Ex):. Values share structure and are cheap to copy.
class Formula {
 public:
  enum class Kind { Atom, Not, And, Or, Implies, Forall, Exists };

  static Formula atom(std::string predicate);
  static Formula atom(std::string predicate, Term arg);
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);

  Kind kind() const { return node_->kind; }

  // Atom accessors.
  const std::string& predicate() const { return node_->name; }
  const std::optional<Term>& arg() const { return node_->arg; }

  // Not / quantifier body.
  const Formula& child() const { return node_->children[0]; }
  // Binary connectives.
  const Formula& lhs() const { return node_->children[0]; }
  const Formula& rhs() const { return node_->children[1]; }
  // Quantifiers.
  const std::string& var() const { return node_->name; }

  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_quantifier() const { return kind() == Kind::Forall || kind() == Kind::Exists; }

  /// Structural equality.
  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

 private:
  struct Node {
    Kind kind;
    std::string name;              // predicate or bound variable
    std::optional<Term> arg;       // atom argument, if applied
    std::vector<Formula> children; // 1 for Not/quantifiers, 2 for binary
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Canonical rendering with minimal parentheses; parse_formula of the
/// result reproduces the input structurally.
std::string render_formula(const Formula& f);

/// Collapses every ¬¬φ to φ, recursively.
Formula strip_double_negation(const Formula& f);

bool contains_quantifier(const Formula& f);
bool has_nested_quantifier(const Formula& f);

/// Constants in order of first appearance (depth first, left to right).
void collect_constants(const Formula& f, std::vector<std::string>& out);

}  // namespace stepverify::fld
