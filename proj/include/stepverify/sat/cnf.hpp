#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace stepverify::sat {

/// DIMACS-style literal: +(index+1) for a positive occurrence of variable
/// `index`, -(index+1) for a negative one. Zero is never a literal.
using Literal = int;

inline int var_of(Literal lit) { return (lit > 0 ? lit : -lit) - 1; }
inline bool positive(Literal lit) { return lit > 0; }

/// A disjunction of literals. Duplicates are removed and tautologies
/// (p together with ¬p) detected at construction.
class Clause {
 public:
  explicit Clause(std::vector<Literal> literals);

  bool tautology() const { return tautology_; }
  bool empty() const { return literals_.empty(); }
  std::span<const Literal> literals() const { return literals_; }

 private:
  std::vector<Literal> literals_;
  bool tautology_ = false;
};

struct CnfFormula {
  std::vector<Clause> clauses;  // tautologies are dropped by add_clause
  int num_vars = 0;
  // Ground-atom names for the leading variable indices; Tseitin
  // auxiliaries are numbered after these and carry no name.
  std::map<int, std::string> var_names;

  void add_clause(Clause clause);
  bool has_empty_clause() const;
};

struct SatResult {
  bool satisfiable = false;
  std::vector<bool> model;  // one value per variable when satisfiable

  static SatResult sat(std::vector<bool> model) { return {true, std::move(model)}; }
  static SatResult unsat() { return {false, {}}; }
};

/// Standard DIMACS serialization, `c` name comments first, then the
/// `p cnf` header and one zero-terminated clause per line.
std::string to_dimacs(const CnfFormula& cnf);

}  // namespace stepverify::sat
