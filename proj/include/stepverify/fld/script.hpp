#pragma once

#include <map>
#include <string>
#include <vector>

#include "stepverify/fld/formula.hpp"

namespace stepverify::fld {

enum class ProofLabel { Proved, Disproved, Unknown };

std::string to_string(ProofLabel label);

/// One deduction step: `fact7 & int1 -> int2: <formula>`.
struct DeductionStep {
  std::vector<std::string> premise_refs;  // factN / intN, nonempty
  std::string target_id;                  // intN
  Formula conclusion;
  std::string raw_text;
};

struct DeductionScript {
  std::vector<DeductionStep> steps;
  ProofLabel proof_label = ProofLabel::Unknown;
};

struct LogicProblem {
  std::string id;
  Formula hypothesis;
  // Facts keyed fact1..factM, kept in id order.
  std::vector<std::pair<std::string, Formula>> facts;

  const Formula* find_fact(const std::string& ref) const;
};

}  // namespace stepverify::fld
