#include "stepverify/sat/solver.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace stepverify::sat {

namespace {

enum : std::int8_t { kUnset = -1, kFalse = 0, kTrue = 1 };

bool literal_true(Literal lit, const std::vector<std::int8_t>& values) {
  std::int8_t v = values[var_of(lit)];
  return v != kUnset && (v == kTrue) == positive(lit);
}

bool literal_false(Literal lit, const std::vector<std::int8_t>& values) {
  std::int8_t v = values[var_of(lit)];
  return v != kUnset && (v == kTrue) != positive(lit);
}

void assign(Literal lit, std::vector<std::int8_t>& values) {
  values[var_of(lit)] = positive(lit) ? kTrue : kFalse;
}

// Unit propagation and pure-literal elimination to fixpoint. Returns false
// on a conflict (some clause has all literals false).
bool simplify(const CnfFormula& cnf, std::vector<std::int8_t>& values) {
  bool changed = true;
  while (changed) {
    changed = false;

    for (const Clause& clause : cnf.clauses) {
      bool satisfied = false;
      Literal unit = 0;
      int unassigned = 0;
      for (Literal lit : clause.literals()) {
        if (literal_true(lit, values)) {
          satisfied = true;
          break;
        }
        if (!literal_false(lit, values)) {
          ++unassigned;
          unit = lit;
        }
      }
      if (satisfied) continue;
      if (unassigned == 0) return false;
      if (unassigned == 1) {
        assign(unit, values);
        changed = true;
      }
    }

    // Polarity census over clauses not yet satisfied.
    std::vector<std::uint8_t> seen(cnf.num_vars, 0);  // bit0 positive, bit1 negative
    for (const Clause& clause : cnf.clauses) {
      bool satisfied = false;
      for (Literal lit : clause.literals()) {
        if (literal_true(lit, values)) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      for (Literal lit : clause.literals()) {
        if (!literal_false(lit, values)) {
          seen[var_of(lit)] |= positive(lit) ? 1 : 2;
        }
      }
    }
    for (int v = 0; v < cnf.num_vars; ++v) {
      if (values[v] != kUnset || seen[v] == 0 || seen[v] == 3) continue;
      values[v] = seen[v] == 1 ? kTrue : kFalse;
      changed = true;
    }
  }
  return true;
}

bool all_satisfied(const CnfFormula& cnf, const std::vector<std::int8_t>& values) {
  for (const Clause& clause : cnf.clauses) {
    bool satisfied = false;
    for (Literal lit : clause.literals()) {
      if (literal_true(lit, values)) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) return false;
  }
  return true;
}

bool dpll(const CnfFormula& cnf, std::vector<std::int8_t> values,
          std::vector<std::int8_t>& solution) {
  if (!simplify(cnf, values)) return false;
  if (all_satisfied(cnf, values)) {
    solution = std::move(values);
    return true;
  }

  // Branch on the lowest-index unassigned variable of an unsatisfied
  // clause, trying true first. Fixed order keeps results deterministic.
  int branch_var = -1;
  for (const Clause& clause : cnf.clauses) {
    bool satisfied = false;
    for (Literal lit : clause.literals()) {
      if (literal_true(lit, values)) {
        satisfied = true;
        break;
      }
    }
    if (satisfied) continue;
    for (Literal lit : clause.literals()) {
      int v = var_of(lit);
      if (values[v] == kUnset && (branch_var < 0 || v < branch_var)) branch_var = v;
    }
  }
  if (branch_var < 0) {
    solution = std::move(values);
    return true;
  }

  for (std::int8_t value : {kTrue, kFalse}) {
    std::vector<std::int8_t> branch = values;
    branch[branch_var] = value;
    if (dpll(cnf, std::move(branch), solution)) return true;
  }
  return false;
}

}  // namespace

SatResult solve(const CnfFormula& cnf) {
  if (cnf.has_empty_clause()) return SatResult::unsat();
  if (cnf.clauses.empty()) {
    return SatResult::sat(std::vector<bool>(cnf.num_vars, false));
  }

  std::vector<std::int8_t> solution;
  if (!dpll(cnf, std::vector<std::int8_t>(cnf.num_vars, kUnset), solution)) {
    return SatResult::unsat();
  }

  std::vector<bool> model(cnf.num_vars, false);
  for (int v = 0; v < cnf.num_vars; ++v) model[v] = solution[v] == kTrue;

  // Soundness gate: a model is only reported after it satisfies every
  // clause.
  for (const Clause& clause : cnf.clauses) {
    bool satisfied = false;
    for (Literal lit : clause.literals()) {
      if (model[var_of(lit)] == positive(lit)) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) throw std::logic_error("solver produced a non-model");
  }
  return SatResult::sat(std::move(model));
}

}  // namespace stepverify::sat
