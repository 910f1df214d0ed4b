#include "stepverify/logic/verifier.hpp"

#include "stepverify/fld/parser.hpp"

namespace stepverify::logic {

std::string to_string(StepReason reason) {
  switch (reason) {
    case StepReason::Entailed: return "entailed";
    case StepReason::NotEntailed: return "not_entailed";
    case StepReason::UnknownReference: return "unknown_reference";
    case StepReason::ForwardReference: return "forward_reference";
  }
  return "not_entailed";
}

StepVerdict verify_step(const fld::LogicProblem& problem,
                        const std::map<std::string, fld::Formula>& established,
                        const fld::DeductionStep& step, const sat::GroundingDomain& domain,
                        int step_index, const std::set<std::string>* later_targets) {
  std::vector<fld::Formula> premises;
  premises.reserve(step.premise_refs.size());
  for (const std::string& ref : step.premise_refs) {
    if (const fld::Formula* fact = problem.find_fact(ref)) {
      premises.push_back(*fact);
      continue;
    }
    if (auto it = established.find(ref); it != established.end()) {
      premises.push_back(it->second);
      continue;
    }
    StepReason reason = later_targets && later_targets->count(ref)
                            ? StepReason::ForwardReference
                            : StepReason::UnknownReference;
    return StepVerdict{step_index, false, reason};
  }
  bool entailed = sat::entails(premises, step.conclusion, domain);
  return StepVerdict{step_index, entailed,
                     entailed ? StepReason::Entailed : StepReason::NotEntailed};
}

VerificationReport verify_solution(const fld::LogicProblem& problem,
                                   const fld::DeductionScript& script,
                                   const sat::GroundingDomain& domain) {
  VerificationReport report;
  report.problem_id = problem.id;

  std::map<std::string, fld::Formula> established;
  std::set<std::string> later_targets;
  for (const auto& step : script.steps) later_targets.insert(step.target_id);

  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const fld::DeductionStep& step = script.steps[i];
    later_targets.erase(step.target_id);
    StepVerdict verdict = verify_step(problem, established, step, domain,
                                      static_cast<int>(i), &later_targets);
    report.verdicts.push_back(verdict);
    report.error_labels.push_back(verdict.label);
    // Taken at face value for the remaining steps, right or wrong.
    established.insert_or_assign(step.target_id, step.conclusion);
  }
  report.conclusion_consistent = check_conclusion(problem, script);
  return report;
}

bool check_conclusion(const fld::LogicProblem& problem, const fld::DeductionScript& script) {
  using fld::ProofLabel;
  if (script.proof_label == ProofLabel::Unknown) return true;
  if (script.steps.empty()) return false;
  fld::Formula last = fld::strip_double_negation(script.steps.back().conclusion);
  if (script.proof_label == ProofLabel::Proved) {
    return last == fld::strip_double_negation(problem.hypothesis);
  }
  return last == fld::strip_double_negation(fld::Formula::negation(problem.hypothesis));
}

FormatVerdict validate_format(std::string_view script_text) {
  fld::DeductionScript script;
  try {
    script = fld::parse_deduction_script(script_text);
  } catch (const fld::UnsupportedConstruct& e) {
    return FormatVerdict::reject("unsupported_construct", e.expected(), e.offset());
  } catch (const fld::DuplicateTarget& e) {
    return FormatVerdict::reject("duplicate_target", e.expected(), e.offset());
  } catch (const fld::ParseError& e) {
    return FormatVerdict::reject("parse_error", e.expected(), e.offset());
  }

  int previous = 0;
  for (const auto& step : script.steps) {
    int index = std::stoi(step.target_id.substr(3));
    if (index <= previous) {
      return FormatVerdict::reject("non_sequential_target",
                                   "target '" + step.target_id + "' does not increase");
    }
    previous = index;
  }
  return FormatVerdict::accept();
}

}  // namespace stepverify::logic
