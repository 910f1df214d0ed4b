#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stepverify/fld/formula.hpp"
#include "stepverify/fld/script.hpp"
#include "stepverify/sat/cnf.hpp"

namespace stepverify::sat {

class QuantifierPresent : public std::invalid_argument {
 public:
  QuantifierPresent() : std::invalid_argument("formula contains a quantifier") {}
};

/// Finite instantiation domain for the quantifiers: the constants named by
/// the problem at hand plus one fresh witness constant. The witness keeps
/// existential conclusions from holding vacuously when the named constants
/// happen to satisfy them. Completeness relative to unrestricted
/// first-order semantics is not claimed.
struct GroundingDomain {
  std::vector<std::string> constants;
  bool includes_fresh_witness = false;

  static GroundingDomain over(std::vector<std::string> constants);

  /// The given constants plus a fresh witness.
  static GroundingDomain with_witness(std::vector<std::string> constants);

  /// Constants of the problem, in order of appearance, plus a fresh witness.
  static GroundingDomain for_problem(const fld::LogicProblem& problem);

  /// Constants of the problem and the script conclusions, plus a fresh
  /// witness, so that steps mentioning new constants still ground.
  static GroundingDomain for_problem(const fld::LogicProblem& problem,
                                     const fld::DeductionScript& script);
};

/// Expands quantifiers over the domain: Forall becomes a conjunction over
/// all constants, Exists a disjunction. Quantifier-free formulas pass
/// through unchanged.
fld::Formula ground(const fld::Formula& f, const GroundingDomain& domain);

/// Equisatisfiable CNF. Conjuncts already in clause shape are emitted
/// directly; everything else goes through a Tseitin encoding whose
/// auxiliary variables are numbered after the ground atoms.
CnfFormula to_cnf(const fld::Formula& f);

/// True iff the grounded premises entail the grounded conclusion, decided
/// by the unsatisfiability of premises ∧ ¬conclusion.
bool entails(std::span<const fld::Formula> premises, const fld::Formula& conclusion,
             const GroundingDomain& domain);

}  // namespace stepverify::sat
