#include "stepverify/sat/cnf.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace stepverify::sat {

Clause::Clause(std::vector<Literal> literals) : literals_(std::move(literals)) {
  for (Literal lit : literals_) {
    if (lit == 0) throw std::invalid_argument("literal 0 is not valid");
  }
  std::sort(literals_.begin(), literals_.end(), [](Literal a, Literal b) {
    if (var_of(a) != var_of(b)) return var_of(a) < var_of(b);
    return a < b;
  });
  literals_.erase(std::unique(literals_.begin(), literals_.end()), literals_.end());
  for (std::size_t i = 1; i < literals_.size(); ++i) {
    if (var_of(literals_[i]) == var_of(literals_[i - 1])) {
      tautology_ = true;
      break;
    }
  }
}

void CnfFormula::add_clause(Clause clause) {
  if (clause.tautology()) return;
  for (Literal lit : clause.literals()) {
    if (var_of(lit) >= num_vars) {
      throw std::invalid_argument("literal refers to variable beyond num_vars");
    }
  }
  clauses.push_back(std::move(clause));
}

bool CnfFormula::has_empty_clause() const {
  for (const Clause& c : clauses) {
    if (c.empty()) return true;
  }
  return false;
}

std::string to_dimacs(const CnfFormula& cnf) {
  std::ostringstream out;
  for (const auto& [index, name] : cnf.var_names) {
    out << "c var " << (index + 1) << ' ' << name << '\n';
  }
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const Clause& c : cnf.clauses) {
    for (Literal lit : c.literals()) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace stepverify::sat
