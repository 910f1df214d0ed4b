#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stepverify/fld/formula.hpp"
#include "stepverify/fld/script.hpp"

namespace stepverify::fld {

/// Raised on any malformed input. `offset` is the byte position in the
/// parsed text; `expected` describes what the parser was looking for.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::string expected);

  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// An intN target defined twice within one script.
class DuplicateTarget : public ParseError {
 public:
  DuplicateTarget(std::size_t offset, const std::string& target);
};

/// Fact identifiers not numbered consecutively from fact1.
class NonConsecutiveFactIds : public ParseError {
 public:
  NonConsecutiveFactIds(std::size_t offset, const std::string& detail);
};

/// Assumption-style steps (`assump` references) are outside the supported
/// fragment and rejected up front.
class UnsupportedConstruct : public ParseError {
 public:
  UnsupportedConstruct(std::size_t offset, const std::string& construct);
};

// Grammar, loosest binding first:
//   formula  := '(' VAR '):' formula | '(' 'E' VAR '):' formula | implies
//   implies  := or ('->' formula)?                  right associative
//   or       := and ('v' and)*                      left associative
//   and      := not ('&' not)*                      left associative
//   not      := '¬' not | primary
//   primary  := '(' formula ')' | atom
//   atom     := '{' PRED '}' ('{' CONST '}' | VAR)?
// A bare identifier immediately after '}' is a variable argument and must
// be bound by an enclosing quantifier. Predicates start with an uppercase
// letter, constants with a lowercase one; a predicate must be used with a
// single arity throughout one parse.
Formula parse_formula(std::string_view text);

/// Parses a `$proof$: ...  $proof_label$: ...` block. Steps are separated
/// by ';' or newlines. Targets must be unique intN identifiers.
DeductionScript parse_deduction_script(std::string_view text);

/// Parses a `$hypothesis$: ... $context$: fact1: ...` block. Text before
/// `$hypothesis$:` (the task instruction) is ignored.
LogicProblem parse_logic_problem(std::string_view text);

/// LogicProblem from pre-split parts, as carried by JSONL records. Fact
/// strings may or may not carry their `factN:` prefix.
LogicProblem parse_logic_problem_parts(const std::string& id, std::string_view hypothesis,
                                       const std::vector<std::string>& facts);

std::string render_deduction_step(const DeductionStep& step);
std::string render_deduction_script(const DeductionScript& script);

}  // namespace stepverify::fld
