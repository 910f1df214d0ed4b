#pragma once

#include "stepverify/sat/cnf.hpp"

namespace stepverify::sat {

/// DPLL with unit propagation and pure-literal elimination. Deterministic:
/// identical inputs produce identical models. Every satisfiable result is
/// checked against all clauses before it is returned.
SatResult solve(const CnfFormula& cnf);

}  // namespace stepverify::sat
