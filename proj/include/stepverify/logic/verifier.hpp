#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stepverify/fld/script.hpp"
#include "stepverify/format_verdict.hpp"
#include "stepverify/sat/ground.hpp"

namespace stepverify::logic {

enum class StepReason { Entailed, NotEntailed, UnknownReference, ForwardReference };

std::string to_string(StepReason reason);

struct StepVerdict {
  int step_index = 0;  // 0-based
  bool label = false;  // true iff the step is correct (reason == Entailed)
  StepReason reason = StepReason::NotEntailed;
};

struct VerificationReport {
  std::string problem_id;
  std::vector<StepVerdict> verdicts;
  bool conclusion_consistent = false;
  std::vector<bool> error_labels;  // error_labels[i] == verdicts[i].label
};

/// Judges one step in isolation: all referenced premises must exist among
/// the problem facts and previously established intermediates, and the
/// conclusion must be entailed by exactly those premises. `later_targets`
/// distinguishes a forward reference from an unknown one.
StepVerdict verify_step(const fld::LogicProblem& problem,
                        const std::map<std::string, fld::Formula>& established,
                        const fld::DeductionStep& step, const sat::GroundingDomain& domain,
                        int step_index = 0,
                        const std::set<std::string>* later_targets = nullptr);

/// Labels every step left to right. Each step's conclusion is added to the
/// established set whatever its verdict, so later steps are judged with
/// earlier intermediate results taken as stated.
VerificationReport verify_solution(const fld::LogicProblem& problem,
                                   const fld::DeductionScript& script,
                                   const sat::GroundingDomain& domain);

/// PROVED proofs must end in the hypothesis, DISPROVED ones in its
/// negation; UNKNOWN claims always pass. Comparison is structural after
/// collapsing double negation.
bool check_conclusion(const fld::LogicProblem& problem, const fld::DeductionScript& script);

/// Filter for raw generations before labeling: the script must parse, use
/// strictly increasing intN targets and contain no `assump` constructs.
FormatVerdict validate_format(std::string_view script_text);

}  // namespace stepverify::logic
