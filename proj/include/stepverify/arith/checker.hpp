#pragma once

#include <span>
#include <string>
#include <vector>

#include "stepverify/arith/expr.hpp"
#include "stepverify/arith/theorem.hpp"

namespace stepverify::arith {

struct StepLabelVector {
  std::vector<bool> labels;  // aligned with proof step order
};

struct StepOutcome {
  bool label = false;
  std::string reason;  // "ok", "transition", or a failure description
};

struct DocumentReport {
  std::vector<bool> labels;
  std::vector<std::string> reasons;
};

/// Environment seeded from the assumptions, evaluated in dependency order.
/// Variables whose definitions fail to evaluate are simply left unbound.
Env build_assumption_env(const TheoremDocument& doc);

/// Judges one step against an environment that trusts everything that came
/// before. Transitions count as correct; a Have holds iff every contained
/// equation holds; ShowThesis checks the shows clause against the
/// assumptions alone. Evaluation errors make the step incorrect, never
/// abort it.
StepOutcome verify_step(const ProofStep& step, const TheoremDocument& doc, const Env& established,
                        const Env& assumptions_only);

/// Labels every step in order. Equalities asserted by earlier Have steps
/// are folded into the environment whether or not they were labeled
/// correct: a single-variable left side rebinds that variable.
StepLabelVector verify_document(const TheoremDocument& doc, std::span<const ProofStep> proof);

/// Like verify_document but keeps the per-step failure reasons.
DocumentReport verify_document_report(const TheoremDocument& doc,
                                      std::span<const ProofStep> proof);

}  // namespace stepverify::arith
