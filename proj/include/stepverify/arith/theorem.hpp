#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stepverify/arith/expr.hpp"
#include "stepverify/format_verdict.hpp"

namespace stepverify::arith {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::string expected, bool invalid_operator = false);

  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }
  /// True when the failure was a symbol outside the accepted operator set
  /// (the proof-script `×` case), as opposed to malformed structure.
  bool invalid_operator() const { return invalid_operator_; }

 private:
  std::size_t offset_;
  std::string expected_;
  bool invalid_operator_;
};

class CyclicDefinition : public ParseError {
 public:
  explicit CyclicDefinition(const std::string& vars);
};

class UnknownSort : public ParseError {
 public:
  UnknownSort(std::size_t offset, const std::string& sort);
};

struct Equation {
  ArithExpr lhs;
  ArithExpr rhs;
  std::string raw;
};

struct Assumption {
  std::string var;
  Sort sort = Sort::Nat;
  ArithExpr defining_expr;
  std::string raw;
};

/// theorem <name>: assumes "..." and "..." ... shows "...". Assumption
/// dependencies must be acyclic.
struct TheoremDocument {
  std::string name;
  std::vector<Assumption> assumptions;
  Equation shows;
  std::string raw_text;

  const Assumption* find(const std::string& var) const;
};

struct ProofStep {
  enum class Kind { Transition, Have, ShowThesis };

  int index = 0;
  Kind kind = Kind::Transition;
  std::vector<Equation> equations;  // nonempty for Have steps
  bool uses_assms = false;
  std::string raw_text;
};

TheoremDocument parse_theorem(std::string_view text);

/// Accepts a `proof - ... qed` block; lines are grouped into steps at
/// have/then/show/thus boundaries. Tactic text (`using assms by simp`,
/// `sorry`) is recorded, never interpreted.
std::vector<ProofStep> parse_proof(std::string_view text);

/// One message per step, the conversation-record form. A single message
/// may carry several `have` lines; they become one step with multiple
/// equations.
std::vector<ProofStep> parse_proof_steps(std::span<const std::string> messages);

Equation parse_equation(std::string_view text);

std::string render_theorem(const TheoremDocument& doc);
std::string render_proof(std::span<const ProofStep> steps);

/// Parse-only format filter over a full document (theorem plus optional
/// proof block): Ok iff everything tokenizes under the accepted operator
/// set and parses.
FormatVerdict validate_theorem_format(std::string_view text);

}  // namespace stepverify::arith
