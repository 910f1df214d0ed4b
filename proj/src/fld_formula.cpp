#include "stepverify/fld/formula.hpp"

#include <algorithm>
#include <utility>

namespace stepverify::fld {

Formula Formula::atom(std::string predicate) {
  return Formula(std::make_shared<Node>(Node{Kind::Atom, std::move(predicate), std::nullopt, {}}));
}

Formula Formula::atom(std::string predicate, Term arg) {
  return Formula(std::make_shared<Node>(Node{Kind::Atom, std::move(predicate), std::move(arg), {}}));
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<Node>(Node{Kind::Not, {}, std::nullopt, {std::move(f)}}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return Formula(
      std::make_shared<Node>(Node{Kind::And, {}, std::nullopt, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return Formula(
      std::make_shared<Node>(Node{Kind::Or, {}, std::nullopt, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<Node>(
      Node{Kind::Implies, {}, std::nullopt, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::forall(std::string var, Formula body) {
  return Formula(
      std::make_shared<Node>(Node{Kind::Forall, std::move(var), std::nullopt, {std::move(body)}}));
}

Formula Formula::exists(std::string var, Formula body) {
  return Formula(
      std::make_shared<Node>(Node{Kind::Exists, std::move(var), std::nullopt, {std::move(body)}}));
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Atom:
      return node_->name == other.node_->name && node_->arg == other.node_->arg;
    case Kind::Forall:
    case Kind::Exists:
      if (node_->name != other.node_->name) return false;
      [[fallthrough]];
    case Kind::Not:
      return node_->children[0] == other.node_->children[0];
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      return node_->children[0] == other.node_->children[0] &&
             node_->children[1] == other.node_->children[1];
  }
  return false;
}

namespace {

// Conjunction and disjunction groups always carry their own parentheses,
// the way the source corpus writes them, so other connectives only wrap
// operands that would otherwise grab too much (implications, quantifier
// prefixes).
void render(const Formula& f, std::string& out);

bool needs_wrap_as_operand(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Implies:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return true;
    default: return false;  // atoms and ¬ bind tight; &/v self-wrap
  }
}

void render_operand(const Formula& f, std::string& out) {
  if (needs_wrap_as_operand(f)) {
    out += '(';
    render(f, out);
    out += ')';
  } else {
    render(f, out);
  }
}

// Left spines of the same connective flatten: ((a & b) & c) prints as one
// chain and reparses to the same left-leaning tree.
void render_chain(const Formula& f, Formula::Kind kind, std::string& out) {
  if (f.kind() == kind) {
    render_chain(f.lhs(), kind, out);
    out += kind == Formula::Kind::And ? " & " : " v ";
    render_operand(f.rhs(), out);
    return;
  }
  render_operand(f, out);
}

void render(const Formula& f, std::string& out) {
  using Kind = Formula::Kind;
  switch (f.kind()) {
    case Kind::Atom:
      out += '{';
      out += f.predicate();
      out += '}';
      if (f.arg()) {
        if (f.arg()->kind == Term::Kind::Constant) {
          out += '{';
          out += f.arg()->name;
          out += '}';
        } else {
          out += f.arg()->name;
        }
      }
      break;
    case Kind::Not:
      out += "¬";
      render_operand(f.child(), out);
      break;
    case Kind::And:
    case Kind::Or:
      out += '(';
      render_chain(f, f.kind(), out);
      out += ')';
      break;
    case Kind::Implies:
      render_operand(f.lhs(), out);
      out += " -> ";
      // Right associative, so a chain stays bare on the right.
      if (f.rhs().is_quantifier()) {
        out += '(';
        render(f.rhs(), out);
        out += ')';
      } else {
        render(f.rhs(), out);
      }
      break;
    case Kind::Forall:
    case Kind::Exists:
      out += '(';
      if (f.kind() == Kind::Exists) out += 'E';
      out += f.var();
      out += "): ";
      render(f.child(), out);
      break;
  }
}

}  // namespace

std::string render_formula(const Formula& f) {
  std::string out;
  render(f, out);
  return out;
}

Formula strip_double_negation(const Formula& f) {
  using Kind = Formula::Kind;
  switch (f.kind()) {
    case Kind::Atom:
      return f;
    case Kind::Not:
      if (f.child().kind() == Kind::Not) return strip_double_negation(f.child().child());
      return Formula::negation(strip_double_negation(f.child()));
    case Kind::And:
      return Formula::conjunction(strip_double_negation(f.lhs()), strip_double_negation(f.rhs()));
    case Kind::Or:
      return Formula::disjunction(strip_double_negation(f.lhs()), strip_double_negation(f.rhs()));
    case Kind::Implies:
      return Formula::implication(strip_double_negation(f.lhs()), strip_double_negation(f.rhs()));
    case Kind::Forall:
      return Formula::forall(f.var(), strip_double_negation(f.child()));
    case Kind::Exists:
      return Formula::exists(f.var(), strip_double_negation(f.child()));
  }
  return f;
}

bool contains_quantifier(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom: return false;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return true;
    case Formula::Kind::Not: return contains_quantifier(f.child());
    default: return contains_quantifier(f.lhs()) || contains_quantifier(f.rhs());
  }
}

namespace {

bool nested_quant(const Formula& f, bool under_quant) {
  switch (f.kind()) {
    case Formula::Kind::Atom: return false;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return under_quant || nested_quant(f.child(), true);
    case Formula::Kind::Not: return nested_quant(f.child(), under_quant);
    default:
      return nested_quant(f.lhs(), under_quant) || nested_quant(f.rhs(), under_quant);
  }
}

}  // namespace

bool has_nested_quantifier(const Formula& f) { return nested_quant(f, false); }

void collect_constants(const Formula& f, std::vector<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      if (f.arg() && f.arg()->kind == Term::Kind::Constant &&
          std::find(out.begin(), out.end(), f.arg()->name) == out.end()) {
        out.push_back(f.arg()->name);
      }
      break;
    case Formula::Kind::Not:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      collect_constants(f.child(), out);
      break;
    default:
      collect_constants(f.lhs(), out);
      collect_constants(f.rhs(), out);
      break;
  }
}

}  // namespace stepverify::fld
