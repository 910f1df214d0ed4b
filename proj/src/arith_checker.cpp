#include "stepverify/arith/checker.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace stepverify::arith {

namespace {

// Sort context of one equation: the declared sort of its variables, which
// must agree. Variable-free equations fall back to nat unless a fractional
// literal or '/' forces real.
Sort equation_context(const Equation& eq, const TheoremDocument& doc) {
  std::vector<std::string> vars;
  eq.lhs.collect_vars(vars);
  eq.rhs.collect_vars(vars);

  std::optional<Sort> context;
  for (const std::string& v : vars) {
    const Assumption* a = doc.find(v);
    if (!a) continue;  // unbound, reported at evaluation
    if (context && *context != a->sort) {
      throw SortMismatch("equation mixes nat and real variables: " + eq.raw);
    }
    context = a->sort;
  }
  if (context) return *context;

  bool real_shaped = false;
  auto scan = [&](auto&& self, const ArithExpr& e) -> void {
    switch (e.kind()) {
      case ArithExpr::Kind::Literal:
        if (denominator(e.value()) != 1) real_shaped = true;
        return;
      case ArithExpr::Kind::Var:
        return;
      case ArithExpr::Kind::Div:
        real_shaped = true;
        [[fallthrough]];
      default:
        self(self, e.lhs());
        self(self, e.rhs());
    }
  };
  scan(scan, eq.lhs);
  scan(scan, eq.rhs);
  return real_shaped ? Sort::Real : Sort::Nat;
}

bool equation_holds(const Equation& eq, const TheoremDocument& doc, const Env& env,
                    std::string& reason) {
  try {
    Sort context = equation_context(eq, doc);
    Rational lhs = eval_expr(eq.lhs, env, context);
    Rational rhs = eval_expr(eq.rhs, env, context);
    if (lhs == rhs) return true;
    reason = "equation does not hold: " + eq.raw;
    return false;
  } catch (const EvalError& e) {
    reason = std::string(e.what()) + " in: " + eq.raw;
    return false;
  }
}

// Single-variable left sides feed the environment for later steps.
void fold_equation(const Equation& eq, const TheoremDocument& doc, Env& env) {
  if (eq.lhs.kind() != ArithExpr::Kind::Var) return;
  const Assumption* a = doc.find(eq.lhs.name());
  if (!a) return;
  try {
    Sort context = equation_context(eq, doc);
    if (context != a->sort) return;
    Rational value = eval_expr(eq.rhs, env, context);
    env[eq.lhs.name()] = Binding{a->sort, std::move(value)};
  } catch (const EvalError&) {
    // An unevaluable right side contributes nothing.
  }
}

}  // namespace

Env build_assumption_env(const TheoremDocument& doc) {
  Env env;
  // Definitions may reference variables declared later, so iterate to a
  // fixpoint; acyclicity was checked at parse time.
  std::size_t bound = 0;
  bool progress = true;
  while (progress && bound < doc.assumptions.size()) {
    progress = false;
    for (const Assumption& a : doc.assumptions) {
      if (env.count(a.var)) continue;
      try {
        Rational value = eval_expr(a.defining_expr, env, a.sort);
        env.emplace(a.var, Binding{a.sort, std::move(value)});
        ++bound;
        progress = true;
      } catch (const EvalError&) {
        // Not yet resolvable (or never will be); steps that rely on it
        // fail with the evaluation error.
      }
    }
  }
  return env;
}

StepOutcome verify_step(const ProofStep& step, const TheoremDocument& doc, const Env& established,
                        const Env& assumptions_only) {
  switch (step.kind) {
    case ProofStep::Kind::Transition:
      return {true, "transition"};
    case ProofStep::Kind::Have: {
      std::string reason;
      for (const Equation& eq : step.equations) {
        if (!equation_holds(eq, doc, established, reason)) return {false, reason};
      }
      return {true, "ok"};
    }
    case ProofStep::Kind::ShowThesis: {
      std::string reason;
      if (equation_holds(doc.shows, doc, assumptions_only, reason)) return {true, "ok"};
      return {false, reason};
    }
  }
  return {false, "unreachable"};
}

StepLabelVector verify_document(const TheoremDocument& doc, std::span<const ProofStep> proof) {
  StepLabelVector out;
  out.labels = verify_document_report(doc, proof).labels;
  return out;
}

DocumentReport verify_document_report(const TheoremDocument& doc,
                                      std::span<const ProofStep> proof) {
  DocumentReport report;
  Env assumptions = build_assumption_env(doc);
  Env env = assumptions;
  for (const ProofStep& step : proof) {
    StepOutcome outcome = verify_step(step, doc, env, assumptions);
    report.labels.push_back(outcome.label);
    report.reasons.push_back(outcome.reason);
    // Asserted equalities are trusted from here on, labels notwithstanding.
    for (const Equation& eq : step.equations) fold_equation(eq, doc, env);
  }
  return report;
}

}  // namespace stepverify::arith
